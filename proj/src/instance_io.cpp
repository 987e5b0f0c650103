#include "gpm/instance_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gpm {

using json = nlohmann::ordered_json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index cols_hint = -1) {
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    Eigen::Index n_cols = cols_hint;
    if (n_rows > 0) n_cols = static_cast<Eigen::Index>(rows.at(0).size());
    if (n_cols < 0) n_cols = 0;
    Eigen::MatrixXd m(n_rows, n_cols);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        const auto& row = rows.at(r);
        if (static_cast<Eigen::Index>(row.size()) != n_cols)
            throw std::runtime_error("ragged matrix in file");
        for (Eigen::Index c = 0; c < n_cols; ++c) m(r, c) = row.at(c).get<double>();
    }
    return m;
}

json labels_to_json(const LabelSpace& ls) {
    json j;
    j["actors"] = ls.actors;
    j["actions"] = ls.actions;
    json pairs = json::array();
    for (const auto& [x, y] : ls.joint) pairs.push_back(json::array({x, y}));
    j["joint"] = std::move(pairs);
    j["background"] = ls.background;
    return j;
}

LabelSpace labels_from_json(const json& j) {
    LabelSpace ls;
    ls.actors = j.at("actors").get<std::vector<std::string>>();
    ls.actions = j.at("actions").get<std::vector<std::string>>();
    for (const auto& pair : j.at("joint"))
        ls.joint.emplace_back(pair.at(0).get<Index>(), pair.at(1).get<Index>());
    ls.background = j.at("background").get<std::string>();
    return ls;
}

} // namespace

std::string instance_to_json(const Instance& inst) {
    json j;
    j["format"] = "gpm-instance/1";
    j["labels"] = labels_to_json(inst.labels);

    json graph;
    graph["n_segments"] = inst.graph.n_segments;
    graph["sizes"] = inst.graph.sizes;
    if (!inst.graph.frame_of.empty()) graph["frame_of"] = inst.graph.frame_of;
    json edges = json::array();
    for (const auto& e : inst.graph.edges) edges.push_back(json::array({e.i, e.j, e.weight}));
    graph["edges"] = std::move(edges);
    j["graph"] = std::move(graph);

    json unaries;
    unaries["actor"] = matrix_to_json(inst.unaries.actor);
    unaries["action"] = matrix_to_json(inst.unaries.action);
    unaries["joint"] = matrix_to_json(inst.unaries.joint);
    json response = json::array();
    for (Eigen::Index z = 0; z < inst.unaries.video_response.size(); ++z)
        response.push_back(inst.unaries.video_response(z));
    unaries["video_response"] = std::move(response);
    j["unaries"] = std::move(unaries);

    json tree;
    tree["n_nodes"] = inst.tree.n_nodes;
    tree["parent"] = inst.tree.parent;
    tree["level"] = inst.tree.level;
    tree["leaf_of"] = inst.tree.leaf_of;
    tree["virtual_root"] = inst.tree.virtual_root;
    j["tree"] = std::move(tree);

    json params;
    params["theta_t"] = inst.params.theta_t;
    params["theta_h"] = inst.params.theta_h;
    params["theta_tau"] = inst.params.theta_tau;
    params["theta_T"] = inst.params.theta_T;
    params["theta_B"] = inst.params.theta_B;
    params["theta_V"] = inst.params.theta_V;
    params["potts_actor"] = inst.params.potts_actor;
    params["potts_action"] = inst.params.potts_action;
    params["max_iters"] = inst.params.max_iters;
    params["epsilon"] = inst.params.epsilon;
    j["params"] = std::move(params);

    if (!inst.geometry.empty()) {
        json geometry;
        geometry["width"] = inst.geometry.width;
        geometry["height"] = inst.geometry.height;
        geometry["frames"] = inst.geometry.frames;
        json boxes = json::array();
        for (const auto& b : inst.geometry.boxes)
            boxes.push_back(json::array({b[0], b[1], b[2], b[3], b[4], b[5]}));
        geometry["boxes"] = std::move(boxes);
        j["geometry"] = std::move(geometry);
    }
    if (!inst.ground_truth.empty()) j["ground_truth"] = inst.ground_truth;
    return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "gpm-instance/1")
        throw std::runtime_error("not a gpm-instance/1 file");
    Instance inst;
    inst.labels = labels_from_json(j.at("labels"));

    const json& graph = j.at("graph");
    inst.graph.n_segments = graph.at("n_segments").get<Index>();
    inst.graph.sizes = graph.at("sizes").get<std::vector<VoxelCount>>();
    if (graph.contains("frame_of"))
        inst.graph.frame_of = graph.at("frame_of").get<std::vector<int>>();
    for (const auto& e : graph.at("edges"))
        inst.graph.edges.push_back(
            {e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<double>()});

    const json& unaries = j.at("unaries");
    inst.unaries.actor = matrix_from_json(unaries.at("actor"),
                                          static_cast<Eigen::Index>(inst.labels.n_actors()));
    inst.unaries.action = matrix_from_json(unaries.at("action"),
                                           static_cast<Eigen::Index>(inst.labels.n_actions()));
    inst.unaries.joint = matrix_from_json(unaries.at("joint"),
                                          static_cast<Eigen::Index>(inst.labels.n_labels()));
    const auto response = unaries.at("video_response").get<std::vector<double>>();
    inst.unaries.video_response =
        Eigen::Map<const Eigen::VectorXd>(response.data(), static_cast<Eigen::Index>(response.size()));

    const json& tree = j.at("tree");
    inst.tree.n_nodes = tree.at("n_nodes").get<Index>();
    inst.tree.parent = tree.at("parent").get<std::vector<Index>>();
    inst.tree.level = tree.at("level").get<std::vector<int>>();
    inst.tree.leaf_of = tree.at("leaf_of").get<std::vector<Index>>();
    inst.tree.virtual_root = tree.value("virtual_root", false);
    if (static_cast<Index>(inst.tree.parent.size()) != inst.tree.n_nodes ||
        static_cast<Index>(inst.tree.level.size()) != inst.tree.n_nodes)
        throw std::runtime_error("tree arrays do not match n_nodes");
    rebuild_derived(inst.tree, inst.graph.sizes);

    const json& params = j.at("params");
    inst.params.theta_t = params.at("theta_t").get<double>();
    inst.params.theta_h = params.at("theta_h").get<double>();
    inst.params.theta_tau = params.at("theta_tau").get<double>();
    inst.params.theta_T = params.at("theta_T").get<double>();
    inst.params.theta_B = params.at("theta_B").get<double>();
    inst.params.theta_V = params.at("theta_V").get<double>();
    inst.params.potts_actor = params.at("potts_actor").get<double>();
    inst.params.potts_action = params.at("potts_action").get<double>();
    inst.params.max_iters = params.at("max_iters").get<int>();
    inst.params.epsilon = params.at("epsilon").get<double>();

    if (j.contains("geometry")) {
        const json& geometry = j.at("geometry");
        inst.geometry.width = geometry.at("width").get<int>();
        inst.geometry.height = geometry.at("height").get<int>();
        inst.geometry.frames = geometry.at("frames").get<int>();
        for (const auto& b : geometry.at("boxes"))
            inst.geometry.boxes.push_back({b.at(0).get<int>(), b.at(1).get<int>(),
                                           b.at(2).get<int>(), b.at(3).get<int>(),
                                           b.at(4).get<int>(), b.at(5).get<int>()});
    }
    if (j.contains("ground_truth"))
        inst.ground_truth = j.at("ground_truth").get<std::vector<Index>>();
    return inst;
}

std::string truth_to_json(const Instance& inst, const Labeling& truth) {
    json j;
    j["format"] = "gpm-truth/1";
    j["labels"] = labels_to_json(inst.labels);
    j["sizes"] = inst.graph.sizes;
    j["truth"] = truth.joint;
    return j.dump(2) + "\n";
}

TruthFile truth_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "gpm-truth/1")
        throw std::runtime_error("not a gpm-truth/1 file");
    TruthFile tf;
    tf.labels = labels_from_json(j.at("labels"));
    tf.sizes = j.at("sizes").get<std::vector<VoxelCount>>();
    tf.truth.joint = j.at("truth").get<std::vector<Index>>();
    return tf;
}

std::string solution_to_json(const Solution& sol) {
    json j;
    j["format"] = "gpm-solution/1";
    j["labeling"] = sol.labeling.joint;
    j["slice"] = sol.slice.active;
    j["video"] = sol.video.active;
    j["converged"] = sol.converged;
    j["iterations"] = sol.iterations;
    return j.dump(2) + "\n";
}

Solution solution_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "gpm-solution/1")
        throw std::runtime_error("not a gpm-solution/1 file");
    Solution sol;
    sol.labeling.joint = j.at("labeling").get<std::vector<Index>>();
    sol.slice.active = j.at("slice").get<std::vector<std::uint8_t>>();
    sol.video.active = j.at("video").get<std::vector<std::uint8_t>>();
    sol.converged = j.at("converged").get<bool>();
    sol.iterations = j.at("iterations").get<int>();
    return sol;
}

std::string trace_to_json(const InferenceTrace& trace) {
    json j;
    j["format"] = "gpm-trace/1";
    j["icm_fallback"] = trace.icm_fallback;
    json iterations = json::array();
    for (const auto& rec : trace.iterations) {
        json r;
        r["iter"] = rec.iter;
        r["labeling_objective"] = rec.labeling_objective;
        r["slice_objective"] = rec.slice_objective;
        r["total_energy"] = rec.total_energy;
        r["active_nodes"] = rec.active_nodes;
        r["labels_changed"] = rec.labels_changed;
        iterations.push_back(std::move(r));
    }
    j["iterations"] = std::move(iterations);
    return j.dump(2) + "\n";
}

std::string synth_config_to_json(const SynthConfig& config, double flip_fraction) {
    json j;
    j["format"] = "gpm-synth/1";
    j["grid"] = json::array({config.width, config.height, config.frames});
    j["segment_block"] = config.segment_block;
    j["n_objects"] = config.n_objects;
    j["actors"] = config.actors;
    j["actions"] = config.actions;
    if (!config.joint.empty()) {
        json pairs = json::array();
        for (const auto& [x, y] : config.joint) pairs.push_back(json::array({x, y}));
        j["joint"] = std::move(pairs);
    }
    j["tree_levels"] = config.tree_levels;
    j["unary_noise"] = config.unary_noise;
    j["response_noise"] = config.response_noise;
    j["seed"] = config.seed;
    if (flip_fraction > 0) j["flip_fraction"] = flip_fraction;
    json params;
    params["theta_t"] = config.params.theta_t;
    params["theta_h"] = config.params.theta_h;
    params["theta_tau"] = config.params.theta_tau;
    params["theta_T"] = config.params.theta_T;
    params["theta_B"] = config.params.theta_B;
    params["theta_V"] = config.params.theta_V;
    params["potts_actor"] = config.params.potts_actor;
    params["potts_action"] = config.params.potts_action;
    params["max_iters"] = config.params.max_iters;
    params["epsilon"] = config.params.epsilon;
    j["params"] = std::move(params);
    return j.dump(2) + "\n";
}

std::pair<SynthConfig, double> synth_config_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "gpm-synth/1")
        throw std::runtime_error("not a gpm-synth/1 file");
    SynthConfig config;
    const json& grid = j.at("grid");
    config.width = grid.at(0).get<int>();
    config.height = grid.at(1).get<int>();
    config.frames = grid.at(2).get<int>();
    config.segment_block = j.at("segment_block").get<int>();
    config.n_objects = j.at("n_objects").get<int>();
    if (j.contains("actors")) config.actors = j.at("actors").get<std::vector<std::string>>();
    if (j.contains("actions")) config.actions = j.at("actions").get<std::vector<std::string>>();
    config.joint.clear();
    if (j.contains("joint"))
        for (const auto& pair : j.at("joint"))
            config.joint.emplace_back(pair.at(0).get<Index>(), pair.at(1).get<Index>());
    config.tree_levels = j.at("tree_levels").get<int>();
    config.unary_noise = j.at("unary_noise").get<double>();
    config.response_noise = j.at("response_noise").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("params")) {
        const json& params = j.at("params");
        Params& p = config.params;
        p.theta_t = params.value("theta_t", p.theta_t);
        p.theta_h = params.value("theta_h", p.theta_h);
        p.theta_tau = params.value("theta_tau", p.theta_tau);
        p.theta_T = params.value("theta_T", p.theta_T);
        p.theta_B = params.value("theta_B", p.theta_B);
        p.theta_V = params.value("theta_V", p.theta_V);
        p.potts_actor = params.value("potts_actor", p.potts_actor);
        p.potts_action = params.value("potts_action", p.potts_action);
        p.max_iters = params.value("max_iters", p.max_iters);
        p.epsilon = params.value("epsilon", p.epsilon);
    }
    return {config, j.value("flip_fraction", 0.0)};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

Instance load_instance(const std::string& path) {
    try {
        return instance_from_json(read_file(path));
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_instance(const std::string& path, const Instance& inst) {
    write_file(path, instance_to_json(inst));
}

} // namespace gpm

#include "gpm/cli.hpp"

#include "gpm/instance_io.hpp"
#include "gpm/metrics.hpp"
#include "gpm/render.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace gpm::cli {

namespace fs = std::filesystem;

namespace {

Instance load_validated(const std::string& path) {
    Instance inst = load_instance(path);
    const ValidationReport report = validate_instance(inst);
    if (!report.ok()) {
        std::ostringstream os;
        os << path << ": invalid instance: " << report.violations.front();
        if (report.violations.size() > 1)
            os << " (+" << report.violations.size() - 1 << " more)";
        throw std::runtime_error(os.str());
    }
    return inst;
}

std::string solution_path_for(const std::string& instance_path) {
    const std::string suffix = ".instance.json";
    if (instance_path.size() > suffix.size() &&
        instance_path.substr(instance_path.size() - suffix.size()) == suffix)
        return instance_path.substr(0, instance_path.size() - suffix.size()) + ".solution.json";
    return instance_path + ".solution.json";
}

struct SolveFlags {
    bool no_gpm = false;
    bool no_video = false;
    int max_iters = -1; // -1: use the instance parameter
    std::int64_t seed = -1;
};

Solution solve_one(const Instance& inst, const SolveFlags& flags, PhaseTimings* timings = nullptr) {
    InferOptions opts;
    opts.use_video = !flags.no_video;
    if (flags.no_gpm) opts.max_iters = 0;
    else if (flags.max_iters >= 0) opts.max_iters = flags.max_iters;
    if (flags.seed >= 0) opts.shuffle_seed = static_cast<std::uint64_t>(flags.seed);
    opts.timings = timings;
    return infer(inst, opts);
}

int cmd_gen(const std::string& config_path, const std::string& out_prefix) {
    auto [config, flip_fraction] = synth_config_from_json(read_file(config_path));
    SynthResult result = generate(config);
    if (flip_fraction > 0)
        result.instance = corrupt(result.instance, result.truth, flip_fraction, config.seed);
    write_file(out_prefix + ".instance.json", instance_to_json(result.instance));
    write_file(out_prefix + ".truth.json", truth_to_json(result.instance, result.truth));
    std::cout << "wrote " << out_prefix << ".instance.json + .truth.json ("
              << result.instance.graph.n_segments << " segments, "
              << result.instance.tree.n_nodes << " tree nodes, "
              << result.instance.labels.n_joint() << " joint labels)\n";
    return 0;
}

void report_solution(const std::string& path, const Solution& sol) {
    std::cout << "solved " << path << ": iterations=" << sol.iterations
              << " converged=" << (sol.converged ? "yes" : "no")
              << " active_nodes=" << sol.slice.count_active()
              << (sol.trace.icm_fallback ? " (icm fallback)" : "") << "\n";
}

int cmd_solve(const std::string& input, const std::string& out, const std::string& trace_out,
              const SolveFlags& flags) {
    if (fs::is_directory(input)) {
        std::vector<std::string> paths;
        for (const auto& entry : fs::directory_iterator(input)) {
            const std::string name = entry.path().string();
            if (name.size() > 14 && name.substr(name.size() - 14) == ".instance.json")
                paths.push_back(name);
        }
        std::sort(paths.begin(), paths.end());
        if (paths.empty()) throw std::runtime_error(input + ": no *.instance.json files");
        for (const auto& path : paths) {
            const Instance inst = load_validated(path);
            const Solution sol = solve_one(inst, flags);
            write_file(solution_path_for(path), solution_to_json(sol));
            const std::string stem = solution_path_for(path);
            write_file(stem.substr(0, stem.size() - 14) + ".trace.json",
                       trace_to_json(sol.trace));
            report_solution(path, sol);
        }
        return 0;
    }
    const Instance inst = load_validated(input);
    const Solution sol = solve_one(inst, flags);
    const std::string out_path = out.empty() ? solution_path_for(input) : out;
    write_file(out_path, solution_to_json(sol));
    if (!trace_out.empty()) write_file(trace_out, trace_to_json(sol.trace));
    report_solution(input, sol);
    return 0;
}

int cmd_eval(const std::string& solution_path, const std::string& truth_path,
             const std::string& json_out) {
    const Solution sol = solution_from_json(read_file(solution_path));
    const TruthFile truth = truth_from_json(read_file(truth_path));
    const Index n_classes = truth.labels.n_labels();
    const EvalReport report = evaluate(sol.labeling, truth.truth, truth.sizes, n_classes);

    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    for (Index c = 0; c < n_classes; ++c) {
        const VoxelCount row = report.confusion.row(c).sum();
        os << truth.labels.label_name(c) << " voxels=" << row << " accuracy=";
        if (row > 0) os << report.per_class_accuracy(c);
        else os << "-";
        os << "\n";
    }
    os << "average_per_class " << report.average_per_class << "\n";
    os << "global_accuracy " << report.global_accuracy << "\n";
    std::cout << os.str();

    if (!json_out.empty()) {
        nlohmann::ordered_json j;
        j["format"] = "gpm-eval/1";
        j["average_per_class"] = report.average_per_class;
        j["global_accuracy"] = report.global_accuracy;
        nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
        for (Index c = 0; c < n_classes; ++c)
            if (report.confusion.row(c).sum() > 0)
                per_class[truth.labels.label_name(c)] = report.per_class_accuracy(c);
        j["per_class"] = std::move(per_class);
        nlohmann::ordered_json confusion = nlohmann::ordered_json::array();
        for (Index r = 0; r < n_classes; ++r) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (Index c = 0; c < n_classes; ++c) row.push_back(report.confusion(r, c));
            confusion.push_back(std::move(row));
        }
        j["confusion"] = std::move(confusion);
        write_file(json_out, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_oracle(const std::string& instance_path, const std::string& lp_out) {
    const Instance inst = load_validated(instance_path);
    if (inst.tree.n_nodes > 22)
        throw std::runtime_error(
            "instance too large for the slice oracle (bound: 22 tree nodes)");
    double combos = 1.0;
    for (Index i = 0; i < inst.graph.n_segments && combos <= 2e6; ++i)
        combos *= inst.labels.n_labels();
    if (combos > 2e6)
        throw std::runtime_error(
            "instance too large for the labeling oracle (bound: 2e6 assignments)");

    const VideoLabels v = compute_video_labels(inst);
    const Labeling init = initialize_labeling(inst, v);

    const SliceCosts costs = slice_costs(init, inst);
    if (!lp_out.empty()) write_file(lp_out, export_blp(inst.tree, costs));
    const Slice dp = solve_slice_dp(inst.tree, costs);
    const Slice oracle_slice = brute_force_slice(inst.tree, costs);
    const double dp_obj = slice_objective(dp, costs);
    const double oracle_obj = slice_objective(oracle_slice, costs);

    const ExpansionProblem problem = build_expansion_problem(inst, dp, v, init);
    Labeling expansion;
    bool fell_back = false;
    try {
        expansion = alpha_expansion(problem, init);
    } catch (const NonMetricError&) {
        expansion = icm(problem, init);
        fell_back = true;
    }
    const Labeling oracle_labeling = brute_force_labeling(problem);
    const double expansion_e = problem.energy(expansion);
    const double oracle_e = problem.energy(oracle_labeling);

    std::ostringstream os;
    os.precision(12);
    os << "slice: dp=" << dp_obj << " oracle=" << oracle_obj << " gap=" << dp_obj - oracle_obj
       << "\n";
    os << "labeling" << (fell_back ? " (icm fallback)" : "") << ": solver=" << expansion_e
       << " oracle=" << oracle_e << " gap=" << expansion_e - oracle_e << "\n";
    std::cout << os.str();
    return 0;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

int cmd_bench(const std::string& instance_path, int repeats) {
    if (repeats < 1) throw std::runtime_error("repeats must be >= 1");
    const Instance inst = load_validated(instance_path);
    std::vector<double> init, slice, labeling, end_to_end;
    int iterations = 0;
    for (int r = 0; r < repeats; ++r) {
        PhaseTimings timings;
        const auto start = std::chrono::steady_clock::now();
        const Solution sol = solve_one(inst, SolveFlags{}, &timings);
        end_to_end.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        init.push_back(timings.init_seconds);
        slice.push_back(median_of(timings.slice_seconds));
        labeling.push_back(median_of(timings.labeling_seconds));
        iterations = sol.iterations;
    }
    std::ostringstream os;
    os.precision(6);
    os << "samples=" << repeats << " iterations=" << iterations << "\n";
    os << "init_s median=" << median_of(init) << "\n";
    os << "slice_per_iter_s median=" << median_of(slice) << "\n";
    os << "labeling_per_iter_s median=" << median_of(labeling) << "\n";
    os << "end_to_end_s median=" << median_of(end_to_end) << "\n";
    std::cout << os.str();
    return 0;
}

int cmd_render(const std::string& labeling_path, const std::string& instance_path, int frame,
               const std::string& out) {
    const Instance inst = load_instance(instance_path);
    const auto j = nlohmann::json::parse(read_file(labeling_path));
    Labeling L;
    const std::string format = j.value("format", "");
    if (format == "gpm-solution/1") L.joint = j.at("labeling").get<std::vector<Index>>();
    else if (format == "gpm-truth/1") L.joint = j.at("truth").get<std::vector<Index>>();
    else throw std::runtime_error(labeling_path + ": expected a solution or truth file");
    write_file(out, render_frame_ppm(inst, L, frame));
    std::cout << "wrote " << out << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"grouping-process solver for joint actor-action labeling over segment graphs"};
    app.require_subcommand(1);

    std::string config_path, out_prefix;
    auto* gen = app.add_subcommand("gen", "generate a planted synthetic instance");
    gen->add_option("--config", config_path, "synth config json")->required();
    gen->add_option("--out", out_prefix, "output path prefix")->required();

    std::string solve_input, solve_out, trace_out;
    SolveFlags flags;
    auto* solve = app.add_subcommand("solve", "run inference on an instance (or a directory)");
    solve->add_option("instance", solve_input, "instance file or directory")->required();
    solve->add_option("--out", solve_out, "solution output path");
    solve->add_option("--trace", trace_out, "trace output path");
    solve->add_flag("--no-gpm", flags.no_gpm, "stop after the initial labeling");
    solve->add_flag("--no-video", flags.no_video, "drop the video-level terms");
    solve->add_option("--max-iters", flags.max_iters, "iteration cap override");
    solve->add_option("--seed", flags.seed, "expansion label-order shuffle seed");

    std::string eval_solution, eval_truth, eval_json;
    auto* eval = app.add_subcommand("eval", "score a solution against a truth file");
    eval->add_option("solution", eval_solution)->required();
    eval->add_option("truth", eval_truth)->required();
    eval->add_option("--json", eval_json, "also write the report as json");

    std::string oracle_instance, oracle_lp;
    auto* oracle = app.add_subcommand("oracle", "compare both solvers against brute force");
    oracle->add_option("instance", oracle_instance)->required();
    oracle->add_option("--lp", oracle_lp, "also export the slice subproblem in LP format");

    std::string bench_instance;
    int repeats = 5;
    auto* bench = app.add_subcommand("bench", "time the solver phases");
    bench->add_option("instance", bench_instance)->required();
    bench->add_option("--repeats", repeats, "number of timed runs");

    std::string render_labeling, render_instance, render_out;
    int frame = 0;
    auto* render = app.add_subcommand("render", "write one frame as a ppm image");
    render->add_option("labeling", render_labeling, "solution or truth file")->required();
    render->add_option("instance", render_instance)->required();
    render->add_option("--frame", frame)->required();
    render->add_option("--out", render_out)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*gen) return cmd_gen(config_path, out_prefix);
        if (*solve) return cmd_solve(solve_input, solve_out, trace_out, flags);
        if (*eval) return cmd_eval(eval_solution, eval_truth, eval_json);
        if (*oracle) return cmd_oracle(oracle_instance, oracle_lp);
        if (*bench) return cmd_bench(bench_instance, repeats);
        if (*render) return cmd_render(render_labeling, render_instance, frame, render_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args);
}

} // namespace gpm::cli

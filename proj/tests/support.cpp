#include "support.hpp"

#include "gpm/hierarchy.hpp"

#include <cmath>

namespace gpm::test {

Instance make_tiny(const TinySpec& spec) {
    Instance inst;
    for (Index x = 0; x < spec.n_actors; ++x)
        inst.labels.actors.push_back("actor" + std::to_string(x));
    for (Index y = 0; y < spec.n_actions; ++y)
        inst.labels.actions.push_back("action" + std::to_string(y));
    for (Index x = 0; x < spec.n_actors; ++x)
        for (Index y = 0; y < spec.n_actions; ++y) inst.labels.joint.emplace_back(x, y);

    inst.graph.n_segments = spec.n_segments;
    inst.graph.sizes =
        spec.sizes.empty() ? std::vector<VoxelCount>(spec.n_segments, 1) : spec.sizes;
    inst.graph.edges = spec.edges;

    inst.unaries.actor = Eigen::MatrixXd::Zero(spec.n_segments, spec.n_actors);
    inst.unaries.action = Eigen::MatrixXd::Zero(spec.n_segments, spec.n_actions);
    inst.unaries.joint = Eigen::MatrixXd::Zero(spec.n_segments, inst.labels.n_labels());
    inst.unaries.video_response = Eigen::VectorXd::Zero(inst.labels.n_joint());

    std::vector<std::vector<Index>> levels = spec.levels;
    if (levels.empty()) levels.push_back(std::vector<Index>(spec.n_segments, 0));
    inst.tree = build_tree(levels, inst.graph.sizes);

    inst.params.theta_t = 0.0;
    inst.params.theta_h = 0.0;
    inst.params.theta_V = 0.0;
    inst.params.potts_actor = 0.0;
    inst.params.potts_action = 0.0;
    inst.params.theta_tau = 1000.0;
    return inst;
}

void refresh_tau(Instance& inst) {
    const double mass = inst.unaries.actor.cwiseAbs().sum() +
                        inst.unaries.action.cwiseAbs().sum() +
                        inst.unaries.joint.cwiseAbs().sum();
    inst.params.theta_tau = std::max(inst.params.theta_tau, 10.0 * mass + 1.0);
}

SupervoxelTree random_tree(std::mt19937_64& rng, int max_nodes) {
    const int n = std::uniform_int_distribution<int>(1, max_nodes)(rng);
    SupervoxelTree tree;
    tree.n_nodes = n;
    tree.parent.assign(n, -1);
    for (int t = 1; t < n; ++t)
        tree.parent[t] = std::uniform_int_distribution<int>(0, t - 1)(rng);
    tree.children.assign(n, {});
    for (int t = 1; t < n; ++t) tree.children[tree.parent[t]].push_back(t);

    std::vector<VoxelCount> sizes;
    for (int t = 0; t < n; ++t)
        if (tree.children[t].empty()) {
            tree.leaf_of.push_back(t);
            sizes.push_back(1);
        }
    tree.level.assign(n, 0);
    for (int t = n - 1; t >= 0; --t)
        for (Index c : tree.children[t]) tree.level[t] = std::max(tree.level[t], tree.level[c] + 1);
    rebuild_derived(tree, sizes);
    return tree;
}

ExpansionProblem random_metric_problem(std::mt19937_64& rng, Index n_nodes, Index n_labels,
                                       bool with_label_costs) {
    std::uniform_real_distribution<double> unary(1.0, 10.0);
    std::uniform_real_distribution<double> coord(0.0, 3.0);
    std::uniform_real_distribution<double> scale(0.2, 2.0);

    ExpansionProblem p;
    p.n_nodes = n_nodes;
    p.n_labels = n_labels;
    p.unary.resize(n_nodes, n_labels);
    for (Index i = 0; i < n_nodes; ++i)
        for (Index l = 0; l < n_labels; ++l) p.unary(i, l) = unary(rng);

    std::vector<std::pair<double, double>> points(n_labels);
    for (auto& pt : points) pt = {coord(rng), coord(rng)};

    for (Index i = 0; i < n_nodes; ++i)
        for (Index j = i + 1; j < n_nodes; ++j) {
            if (std::uniform_real_distribution<double>(0, 1)(rng) > 0.5) continue;
            const double s = scale(rng);
            PairwiseTerm term{i, j, Eigen::MatrixXd(n_labels, n_labels)};
            for (Index a = 0; a < n_labels; ++a)
                for (Index b = 0; b < n_labels; ++b)
                    term.table(a, b) = s * std::hypot(points[a].first - points[b].first,
                                                      points[a].second - points[b].second);
            p.crf_edges.push_back(std::move(term));
        }

    // Synthetic projections on a 2x2 class grid, last label as background.
    p.label_actor.assign(n_labels, -1);
    p.label_action.assign(n_labels, -1);
    for (Index l = 0; l + 1 < n_labels; ++l) {
        p.label_actor[l] = l % 2;
        p.label_action[l] = (l / 2) % 2;
    }
    p.actor_cost = Eigen::VectorXd::Zero(2);
    p.action_cost = Eigen::VectorXd::Zero(2);
    if (with_label_costs) {
        std::uniform_real_distribution<double> cost(0.0, 3.0);
        for (int c = 0; c < 2; ++c) {
            p.actor_cost(c) = cost(rng);
            p.action_cost(c) = cost(rng);
        }
    }
    return p;
}

SynthConfig standard_config(std::uint64_t seed, double unary_noise, double response_noise) {
    SynthConfig config;
    config.width = 16;
    config.height = 16;
    config.frames = 8;
    config.segment_block = 2;
    config.n_objects = 2;
    config.tree_levels = 3;
    config.unary_noise = unary_noise;
    config.response_noise = response_noise;
    config.seed = seed;
    return config;
}

} // namespace gpm::test

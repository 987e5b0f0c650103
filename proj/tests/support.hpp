#pragma once

#include "gpm/instance.hpp"
#include "gpm/label_solver.hpp"
#include "gpm/synth.hpp"

#include <random>

namespace gpm::test {

/// Small hand-buildable instance: full actor x action product, zero unaries,
/// neutral parameters (no pairwise, no label costs, theta_tau large enough
/// for any unaries the caller writes afterwards).
struct TinySpec {
    Index n_segments = 2;
    Index n_actors = 2;
    Index n_actions = 2;
    std::vector<GraphEdge> edges;
    std::vector<std::vector<Index>> levels; // default: one supervoxel over everything
    std::vector<VoxelCount> sizes;          // default: all 1
};

Instance make_tiny(const TinySpec& spec);

/// Raises theta_tau back over the validation floor after unary edits.
void refresh_tau(Instance& inst);

/// Random rooted tree with valid members/sizes (one unit segment per leaf).
SupervoxelTree random_tree(std::mt19937_64& rng, int max_nodes);

/// Random expansion problem whose pairwise tables are scaled point-distance
/// metrics; unaries in [1, 10]. Labels get synthetic actor/action projections
/// with the last label acting as background. Optional positive label costs.
ExpansionProblem random_metric_problem(std::mt19937_64& rng, Index n_nodes, Index n_labels,
                                       bool with_label_costs);

/// The 50-seed synthetic suite configuration used across the verification
/// suites: 256 segments, 37-node tree, two planted objects.
SynthConfig standard_config(std::uint64_t seed, double unary_noise = 0.0,
                            double response_noise = 0.0);

} // namespace gpm::test

#pragma once

#include "gpm/energy.hpp"

#include <string>

namespace gpm {

/// Per-node activation cost: alpha_t = entropy(t) * voxel_size(t) + theta_h.
struct SliceCosts {
    Eigen::VectorXd alpha;
};

SliceCosts slice_costs(const Labeling& L, const Instance& inst);

double slice_objective(const Slice& s, const SliceCosts& costs);

/// True iff every root-to-leaf path contains exactly one active node.
bool is_valid_slice(const Slice& s, const PathMatrix& pm);

/// Exact minimizer of sum(alpha_t * s_t) over valid slices, by bottom-up
/// recursion best(t) = min(alpha_t, sum over children of best(c)). When a
/// node's cost ties the children sum, the single coarser node wins.
Slice solve_slice_dp(const SupervoxelTree& tree, const SliceCosts& costs);

/// Enumeration oracle: tries all 2^n activation vectors, keeps the valid ones
/// and returns the best, ties to the lexicographically smallest vector.
/// Throws std::invalid_argument above 22 nodes.
Slice brute_force_slice(const SupervoxelTree& tree, const SliceCosts& costs);

/// The slice subproblem as an LP-format text program (minimize the linear
/// objective subject to one equality per root-to-leaf path, all variables
/// binary), so an external solver can cross-check the DP.
std::string export_blp(const SupervoxelTree& tree, const SliceCosts& costs);

} // namespace gpm

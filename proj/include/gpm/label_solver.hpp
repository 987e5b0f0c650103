#pragma once

#include "gpm/energy.hpp"

#include <optional>

namespace gpm {

/// One pairwise term: a full n_labels x n_labels energy table on an unordered
/// segment pair. Tables have zero diagonals.
struct PairwiseTerm {
    Index i = 0, j = 0;
    Eigen::MatrixXd table;
};

/// The video-labeling subproblem with the slice and video activation fixed:
/// effective unaries, the contrast-weighted CRF edges, the fully connected
/// member cliques of every active tree node (with the dominant-label gating
/// already folded in), and per-class label costs.
struct ExpansionProblem {
    Index n_nodes = 0;
    Index n_labels = 0;
    Eigen::MatrixXd unary;                  // n_nodes x n_labels
    std::vector<PairwiseTerm> crf_edges;
    std::vector<PairwiseTerm> group_edges;
    Eigen::VectorXd actor_cost;             // per actor class
    Eigen::VectorXd action_cost;            // per action class
    std::vector<Index> label_actor;         // projections, -1 = null
    std::vector<Index> label_action;

    /// Full objective: unary + all pairwise terms + label costs for the
    /// actor/action classes present in L.
    double energy(const Labeling& L) const;
};

/// Unfolds the instance under a fixed slice and video activation. The
/// dominant-label gates of the refinement cliques are frozen against
/// `current`, which is what makes the group tables pairwise. Any activation
/// vector is accepted; overlapping active nodes merge parallel group edges by
/// summing their tables.
ExpansionProblem build_expansion_problem(const Instance& inst, const Slice& s,
                                         const VideoLabels& v, const Labeling& current);

/// Thrown by alpha_expansion when some pairwise table fails the metric check.
struct NonMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Move-making minimization: cycles over labels, solving each expansion move
/// exactly by min-cut (with auxiliary nodes for label costs); commits a move
/// only on strict decrease of the full objective and stops after a full cycle
/// without improvement. Label order is index order, or a seeded shuffle.
Labeling alpha_expansion(const ExpansionProblem& problem, Labeling init,
                         std::optional<std::uint64_t> shuffle_seed = {});

/// Coordinate descent to a local minimum of the full objective.
Labeling icm(const ExpansionProblem& problem, Labeling init);

/// Exhaustive minimum over n_labels^n_nodes assignments, ties to the
/// lexicographically smallest labeling. Throws std::invalid_argument when the
/// assignment count exceeds 2e6.
Labeling brute_force_labeling(const ExpansionProblem& problem);

/// True iff every pairwise table has a zero diagonal and satisfies the
/// triangle inequality over all label triples.
bool check_submodular(const ExpansionProblem& problem);

} // namespace gpm

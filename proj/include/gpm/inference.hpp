#pragma once

#include "gpm/label_solver.hpp"
#include "gpm/slice_solver.hpp"

namespace gpm {

struct IterationRecord {
    int iter = 0;
    double labeling_objective = 0.0; // expansion-problem objective after the labeling solve
    double slice_objective = 0.0;    // sum of active-node costs after the slice solve
    double total_energy = 0.0;       // full model energy at the end of the iteration
    int active_nodes = 0;
    int labels_changed = 0;
};

struct InferenceTrace {
    std::vector<IterationRecord> iterations;
    bool icm_fallback = false; // labeling solves degraded to ICM (non-metric tables)
};

struct Solution {
    Labeling labeling;
    Slice slice;
    VideoLabels video;
    InferenceTrace trace;
    bool converged = false;
    int iterations = 0;
};

struct PhaseTimings {
    double init_seconds = 0.0;
    std::vector<double> slice_seconds;    // per iteration
    std::vector<double> labeling_seconds; // per iteration
};

struct InferOptions {
    bool use_video = true;               // when false, drops the video unary and label costs
    std::optional<int> max_iters;        // overrides the instance parameter
    std::optional<std::uint64_t> shuffle_seed; // expansion label order
    PhaseTimings* timings = nullptr;
};

/// v_z = 1 iff the video response strictly exceeds theta_T; held fixed for
/// the rest of inference.
VideoLabels compute_video_labels(const Instance& inst);

/// Coarse start: solves the labeling subproblem with no active groups
/// (CRF + label costs only), from the per-segment unary argmin.
Labeling initialize_labeling(const Instance& inst, const VideoLabels& v,
                             const InferOptions& opts = {});

/// Bidirectional loop: compute video labels, initialize, then alternate the
/// slice subproblem and the labeling subproblem (warm-started) until the
/// slice reaches a fixed point and the labeling objective has stopped
/// decreasing, or max_iters is hit. Every intermediate slice is validated and
/// each conditional solve is asserted non-increasing on its own objective.
Solution infer(const Instance& inst, const InferOptions& opts = {});

} // namespace gpm

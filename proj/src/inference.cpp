#include "gpm/inference.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace gpm {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Labeling unary_argmin(const Instance& inst) {
    Labeling L;
    L.joint.resize(inst.graph.n_segments);
    for (Index i = 0; i < inst.graph.n_segments; ++i) {
        Index best = 0;
        double best_e = unary_energy(inst, i, 0);
        for (Index l = 1; l < inst.labels.n_labels(); ++l) {
            const double e = unary_energy(inst, i, l);
            if (e < best_e) {
                best = l;
                best_e = e;
            }
        }
        L.joint[i] = best;
    }
    return L;
}

Labeling solve_labeling(const ExpansionProblem& problem, Labeling init,
                        const InferOptions& opts, bool& icm_fallback) {
    try {
        return alpha_expansion(problem, init, opts.shuffle_seed);
    } catch (const NonMetricError&) {
        icm_fallback = true;
        return icm(problem, std::move(init));
    }
}

} // namespace

VideoLabels compute_video_labels(const Instance& inst) {
    VideoLabels v;
    v.active.resize(inst.labels.n_joint());
    for (Index z = 0; z < inst.labels.n_joint(); ++z)
        v.active[z] = inst.unaries.video_response(z) > inst.params.theta_T ? 1 : 0;
    return v;
}

Labeling initialize_labeling(const Instance& inst, const VideoLabels& v,
                             const InferOptions& opts) {
    Slice no_groups;
    no_groups.active.assign(inst.tree.n_nodes, 0);
    Labeling start = unary_argmin(inst);
    const ExpansionProblem problem = build_expansion_problem(inst, no_groups, v, start);
    bool fallback = false;
    return solve_labeling(problem, std::move(start), opts, fallback);
}

Solution infer(const Instance& inst, const InferOptions& opts) {
    const auto t_start = std::chrono::steady_clock::now();

    // Without the video stream the response unary vanishes with v == 0 and
    // the label costs are dropped by zeroing their scale.
    Instance local;
    const Instance* model = &inst;
    if (!opts.use_video) {
        local = inst;
        local.params.theta_V = 0.0;
        model = &local;
    }

    Solution sol;
    sol.video.active.assign(inst.labels.n_joint(), 0);
    if (opts.use_video) sol.video = compute_video_labels(*model);

    Slice no_groups;
    no_groups.active.assign(model->tree.n_nodes, 0);
    Labeling start = unary_argmin(*model);
    const ExpansionProblem init_problem = build_expansion_problem(*model, no_groups, sol.video, start);
    sol.labeling = solve_labeling(init_problem, std::move(start), opts, sol.trace.icm_fallback);
    const double init_objective = init_problem.energy(sol.labeling);
    if (opts.timings) opts.timings->init_seconds = seconds_since(t_start);

    const double eps = model->params.epsilon * std::max(1.0, std::abs(init_objective));
    const int max_iters = opts.max_iters.value_or(model->params.max_iters);
    const PathMatrix pm = path_matrix(model->tree);

    Slice prev_slice;
    double prev_objective = init_objective;
    for (int iter = 1; iter <= max_iters; ++iter) {
        const auto t_slice = std::chrono::steady_clock::now();
        const SliceCosts costs = slice_costs(sol.labeling, *model);
        Slice slice = solve_slice_dp(model->tree, costs);
        if (!is_valid_slice(slice, pm))
            throw std::logic_error("infer: slice solver produced an invalid slice");
        const double slice_obj = slice_objective(slice, costs);
        if (iter > 1) {
            // The DP is exact, so under the current costs the fresh slice can
            // never lose to the previous one.
            const double prev_under_current = slice_objective(prev_slice, costs);
            if (slice_obj > prev_under_current + 1e-9 * (1.0 + std::abs(prev_under_current)))
                throw std::logic_error("infer: slice objective increased within its own solve");
        }
        if (opts.timings) opts.timings->slice_seconds.push_back(seconds_since(t_slice));

        const auto t_label = std::chrono::steady_clock::now();
        const ExpansionProblem problem =
            build_expansion_problem(*model, slice, sol.video, sol.labeling);
        const double before = problem.energy(sol.labeling);
        Labeling next = solve_labeling(problem, sol.labeling, opts, sol.trace.icm_fallback);
        const double after = problem.energy(next);
        if (after > before + 1e-9 * (1.0 + std::abs(before)))
            throw std::logic_error("infer: labeling objective increased within its own solve");
        if (opts.timings) opts.timings->labeling_seconds.push_back(seconds_since(t_label));

        int changed = 0;
        for (Index i = 0; i < model->graph.n_segments; ++i)
            changed += next.joint[i] != sol.labeling.joint[i] ? 1 : 0;
        sol.labeling = std::move(next);
        sol.iterations = iter;

        IterationRecord rec;
        rec.iter = iter;
        rec.labeling_objective = after;
        rec.slice_objective = slice_obj;
        rec.total_energy = total_energy(sol.labeling, slice, sol.video, *model);
        rec.active_nodes = slice.count_active();
        rec.labels_changed = changed;
        sol.trace.iterations.push_back(rec);

        // Fixed point: the slice stopped moving and the labeling energy
        // stopped decreasing. On the first round an unchanged labeling is the
        // fixed point witness.
        const bool slice_fixed = iter == 1 ? changed == 0 : slice == prev_slice;
        const double decrease = iter == 1 ? 0.0 : prev_objective - after;
        prev_slice = std::move(slice);
        prev_objective = after;
        if (slice_fixed && decrease < eps) {
            sol.converged = true;
            break;
        }
    }

    if (sol.trace.iterations.empty()) {
        // Zero grouping iterations: report the slice the final labeling
        // induces, without relabeling.
        const SliceCosts costs = slice_costs(sol.labeling, *model);
        sol.slice = solve_slice_dp(model->tree, costs);
    } else {
        sol.slice = prev_slice;
    }
    if (!is_valid_slice(sol.slice, pm)) throw std::logic_error("infer: final slice is invalid");
    return sol;
}

} // namespace gpm

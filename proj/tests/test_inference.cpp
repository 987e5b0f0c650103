#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gpm/inference.hpp"
#include "gpm/instance_io.hpp"
#include "gpm/metrics.hpp"
#include "support.hpp"

#include <random>

using namespace gpm;
using namespace gpm::test;

TEST_CASE("video labels threshold strictly") {
    Instance inst = make_tiny({});
    inst.params.theta_T = 0.5;
    SUBCASE("all below threshold") {
        inst.unaries.video_response << 0.1, 0.4, 0.3, 0.2;
        const VideoLabels v = compute_video_labels(inst);
        CHECK(v.active == std::vector<std::uint8_t>{0, 0, 0, 0});
    }
    SUBCASE("mixed responses") {
        inst.unaries.video_response << 0.9, 0.2, 0.6, 0.1;
        const VideoLabels v = compute_video_labels(inst);
        CHECK(v.active == std::vector<std::uint8_t>{1, 0, 1, 0});
    }
    SUBCASE("a response exactly at the threshold stays off") {
        inst.unaries.video_response << 0.5, 0.9, 0.5, 0.2;
        const VideoLabels v = compute_video_labels(inst);
        CHECK(v.active == std::vector<std::uint8_t>{0, 1, 0, 0});
    }
}

TEST_CASE("initialization solves the group-free problem") {
    SUBCASE("without couplings it is the unary argmin") {
        test::TinySpec spec;
        spec.n_segments = 3;
        Instance inst = make_tiny(spec);
        inst.unaries.joint << 1, 0, 2, 2, 2, //
            0, 1, 2, 2, 2,                   //
            2, 2, 2, 2, 0;
        refresh_tau(inst);
        VideoLabels v;
        v.active.assign(inst.labels.n_joint(), 0);
        const Labeling L = initialize_labeling(inst, v);
        CHECK(L.joint == std::vector<Index>{1, 0, 4});
    }
    SUBCASE("noiseless planted instances are recovered exactly") {
        for (std::uint64_t seed : {1u, 7u, 23u}) {
            const SynthResult made = generate(standard_config(seed));
            const VideoLabels v = compute_video_labels(made.instance);
            const Labeling L = initialize_labeling(made.instance, v);
            CHECK(L.joint == made.truth.joint);
        }
    }
    SUBCASE("never worse than the argmin start under its own objective") {
        const SynthResult made = generate(standard_config(99, 0.5, 0.2));
        const Instance& inst = made.instance;
        const VideoLabels v = compute_video_labels(inst);
        Slice empty;
        empty.active.assign(inst.tree.n_nodes, 0);
        Labeling argmin{std::vector<Index>(inst.graph.n_segments)};
        for (Index i = 0; i < inst.graph.n_segments; ++i) {
            Index best = 0;
            for (Index l = 1; l < inst.labels.n_labels(); ++l)
                if (unary_energy(inst, i, l) < unary_energy(inst, i, best)) best = l;
            argmin.joint[i] = best;
        }
        const ExpansionProblem problem = build_expansion_problem(inst, empty, v, argmin);
        const Labeling L = initialize_labeling(inst, v);
        CHECK(problem.energy(L) <= problem.energy(argmin) + 1e-9);
    }
}

TEST_CASE("single segment with a single node converges immediately") {
    test::TinySpec spec;
    spec.n_segments = 1;
    Instance inst = make_tiny(spec);
    inst.unaries.joint << 3, 1, 2, 5, 4;
    refresh_tau(inst);
    const Solution sol = infer(inst);
    CHECK(sol.iterations == 1);
    CHECK(sol.converged);
    CHECK(sol.labeling.joint == std::vector<Index>{1});
    CHECK(sol.slice.active == std::vector<std::uint8_t>{1});
    CHECK(sol.trace.iterations.size() == 1);
}

TEST_CASE("noiseless inference recovers the planted truth") {
    for (std::uint64_t seed : {3u, 14u}) {
        const SynthResult made = generate(standard_config(seed));
        const Solution sol = infer(made.instance);
        CHECK(sol.converged);
        const EvalReport report = evaluate(sol.labeling, made.truth, made.instance.graph.sizes,
                                           made.instance.labels.n_labels());
        CHECK(report.average_per_class == 1.0);
        CHECK(report.global_accuracy == 1.0);
    }
}

TEST_CASE("grouping refinement recovers corrupted labels") {
    int improved = 0, worsened = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SynthResult made = generate(standard_config(seed, 0.3, 0.0));
        const Instance noisy = corrupt(made.instance, made.truth, 0.2, seed + 1000);
        REQUIRE(validate_instance(noisy).ok());

        InferOptions ablation;
        ablation.max_iters = 0;
        const Solution base = infer(noisy, ablation);
        const Solution full = infer(noisy);
        const Index n_classes = noisy.labels.n_labels();
        const double acc_base =
            evaluate(base.labeling, made.truth, noisy.graph.sizes, n_classes).average_per_class;
        const double acc_full =
            evaluate(full.labeling, made.truth, noisy.graph.sizes, n_classes).average_per_class;
        if (acc_full > acc_base) ++improved;
        if (acc_full < acc_base) ++worsened;
    }
    CHECK(improved > worsened);
}

TEST_CASE("iteration cap and trace bookkeeping") {
    const SynthResult made = generate(standard_config(42, 0.4, 0.1));
    const Instance noisy = corrupt(made.instance, made.truth, 0.3, 77);
    InferOptions opts;
    opts.max_iters = 3;
    const Solution sol = infer(noisy, opts);
    CHECK(sol.iterations <= 3);
    CHECK(sol.trace.iterations.size() == static_cast<std::size_t>(sol.iterations));
    for (std::size_t k = 0; k < sol.trace.iterations.size(); ++k) {
        CHECK(sol.trace.iterations[k].iter == static_cast<int>(k) + 1);
        CHECK(sol.trace.iterations[k].active_nodes > 0);
    }
    const PathMatrix pm = path_matrix(noisy.tree);
    CHECK(is_valid_slice(sol.slice, pm));
}

TEST_CASE("zero grouping iterations reports the induced slice") {
    const SynthResult made = generate(standard_config(8, 0.2, 0.0));
    InferOptions opts;
    opts.max_iters = 0;
    const Solution sol = infer(made.instance, opts);
    CHECK(sol.iterations == 0);
    CHECK_FALSE(sol.converged);
    CHECK(sol.trace.iterations.empty());
    CHECK(is_valid_slice(sol.slice, path_matrix(made.instance.tree)));
}

TEST_CASE("inference is deterministic byte for byte") {
    const SynthResult made = generate(standard_config(5, 0.3, 0.1));
    const Instance noisy = corrupt(made.instance, made.truth, 0.2, 9);
    InferOptions opts;
    opts.shuffle_seed = 1234;
    const Solution a = infer(noisy, opts);
    const Solution b = infer(noisy, opts);
    CHECK(solution_to_json(a) == solution_to_json(b));
    CHECK(trace_to_json(a.trace) == trace_to_json(b.trace));
}

TEST_CASE("dropping the video stream removes label costs from the model") {
    // One segment whose unary slightly prefers an unsupported class; with
    // the video stream the label cost flips it, without it stays.
    test::TinySpec spec;
    spec.n_segments = 1;
    Instance inst = make_tiny(spec);
    inst.params.theta_V = 2.0;
    inst.params.theta_B = 100.0;
    inst.unaries.joint << 0.0, 0.5, 3, 3, 3; // label 0 unsupported, label 1 supported
    inst.unaries.video_response << 0.0, 1.0, 0.0, 0.0;
    refresh_tau(inst);

    const Solution with_video = infer(inst);
    CHECK(with_video.labeling.joint == std::vector<Index>{1});
    InferOptions opts;
    opts.use_video = false;
    const Solution without = infer(inst, opts);
    CHECK(without.labeling.joint == std::vector<Index>{0});
    CHECK(without.video.active == std::vector<std::uint8_t>{0, 0, 0, 0});
}

TEST_CASE("non-metric instances degrade to icm with a trace annotation") {
    test::TinySpec spec;
    spec.n_segments = 2;
    spec.edges = {{0, 1, 1.0}};
    Instance inst = make_tiny(spec);
    inst.params.potts_actor = 0.3; // pw below 1/2 breaks the triangle inequality
    inst.params.potts_action = 0.3;
    inst.unaries.joint << 0.2, 1, 1, 1, 1, 1, 0.2, 1, 1, 1;
    refresh_tau(inst);
    const Solution sol = infer(inst);
    CHECK(sol.trace.icm_fallback);
    CHECK(sol.labeling.size() == 2);
}

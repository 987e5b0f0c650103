#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gpm/inference.hpp"
#include "gpm/instance_io.hpp"
#include "gpm/metrics.hpp"
#include "support.hpp"

#include <cmath>

using namespace gpm;
using namespace gpm::test;

TEST_CASE("every generated instance validates cleanly") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        SynthConfig config = standard_config(seed, 0.1 * seed, 0.05 * seed);
        config.n_objects = static_cast<int>(seed % 4);
        config.tree_levels = 1 + static_cast<int>(seed % 3);
        const SynthResult made = generate(config);
        const ValidationReport report = validate_instance(made.instance);
        INFO("seed ", seed, ": ",
             report.ok() ? "" : report.violations.front());
        CHECK(report.ok());
        CHECK(made.instance.ground_truth == made.truth.joint);
    }
}

TEST_CASE("generation is deterministic per seed") {
    const SynthConfig config = standard_config(77, 0.3, 0.2);
    const SynthResult a = generate(config);
    const SynthResult b = generate(config);
    CHECK(instance_to_json(a.instance) == instance_to_json(b.instance));
    CHECK(a.truth.joint == b.truth.joint);

    SynthConfig other = config;
    other.seed = 78;
    CHECK(instance_to_json(generate(other).instance) != instance_to_json(a.instance));
}

TEST_CASE("no planted objects means background everywhere") {
    SynthConfig config = standard_config(3);
    config.n_objects = 0;
    const SynthResult made = generate(config);
    const Index bg = made.instance.labels.background_label();
    for (Index l : made.truth.joint) CHECK(l == bg);
    const VideoLabels v = compute_video_labels(made.instance);
    for (auto a : v.active) CHECK(a == 0);
}

TEST_CASE("noiseless unaries are minimized at the truth") {
    const SynthResult made = generate(standard_config(11));
    const Instance& inst = made.instance;
    for (Index i = 0; i < inst.graph.n_segments; ++i)
        for (Index l = 0; l < inst.labels.n_labels(); ++l) {
            if (l == made.truth.joint[i]) CHECK(unary_energy(inst, i, l) == 0.0);
            else CHECK(unary_energy(inst, i, l) == 1.0);
        }
    for (Index z = 0; z < inst.labels.n_joint(); ++z) {
        const double r = inst.unaries.video_response(z);
        CHECK((r == 0.0 || r == 1.0));
    }
}

TEST_CASE("edges across differently labeled truth regions carry no contrast") {
    const SynthResult made = generate(standard_config(13));
    for (const auto& e : made.instance.graph.edges)
        if (made.truth.joint[e.i] != made.truth.joint[e.j]) CHECK(e.weight == 0.0);
}

TEST_CASE("bad configurations are refused with a named field") {
    SynthConfig config = standard_config(1);
    config.segment_block = 3; // 16 % 3 != 0
    CHECK_THROWS_WITH_AS(static_cast<void>(generate(config)),
                         doctest::Contains("segment_block"), std::invalid_argument);
    config = standard_config(1);
    config.tree_levels = 0;
    CHECK_THROWS_AS(static_cast<void>(generate(config)), std::invalid_argument);
    config = standard_config(1);
    config.unary_noise = -0.5;
    CHECK_THROWS_AS(static_cast<void>(generate(config)), std::invalid_argument);
}

TEST_CASE("objects that cannot fit the grid are refused") {
    SynthConfig config;
    config.width = 2;
    config.height = 2;
    config.frames = 8;
    config.segment_block = 2;
    config.n_objects = 4;
    config.tree_levels = 1;
    bool threw = false;
    for (std::uint64_t seed = 0; seed < 32 && !threw; ++seed) {
        config.seed = seed;
        try {
            static_cast<void>(generate(config));
        } catch (const std::invalid_argument& e) {
            threw = std::string(e.what()).find("cannot fit") != std::string::npos;
        }
    }
    CHECK(threw);
}

TEST_CASE("corrupt flips exactly the requested fraction") {
    const SynthResult made = generate(standard_config(21)); // noiseless
    const Instance& inst = made.instance;
    SUBCASE("zero fraction leaves the instance untouched") {
        const Instance same = corrupt(inst, made.truth, 0.0, 5);
        CHECK(instance_to_json(same) == instance_to_json(inst));
    }
    SUBCASE("full fraction moves every argmin off the truth") {
        const Instance broken = corrupt(inst, made.truth, 1.0, 5);
        for (Index i = 0; i < inst.graph.n_segments; ++i) {
            Index best = 0;
            for (Index l = 1; l < inst.labels.n_labels(); ++l)
                if (broken.unaries.joint(i, l) < broken.unaries.joint(i, best)) best = l;
            CHECK(best != made.truth.joint[i]);
        }
    }
    SUBCASE("partial fraction corrupts the rounded count") {
        const Instance dented = corrupt(inst, made.truth, 0.2, 5);
        int wrong = 0;
        for (Index i = 0; i < inst.graph.n_segments; ++i) {
            Index best = 0;
            for (Index l = 1; l < inst.labels.n_labels(); ++l)
                if (dented.unaries.joint(i, l) < dented.unaries.joint(i, best)) best = l;
            if (best != made.truth.joint[i]) ++wrong;
        }
        CHECK(wrong == static_cast<int>(std::llround(0.2 * inst.graph.n_segments)));
        CHECK(validate_instance(dented).ok());
    }
}

TEST_CASE("evaluation metrics") {
    SUBCASE("perfect prediction scores ones") {
        const SynthResult made = generate(standard_config(31, 0.2, 0.1));
        const EvalReport report = evaluate(made.truth, made.truth, made.instance.graph.sizes,
                                           made.instance.labels.n_labels());
        CHECK(report.average_per_class == 1.0);
        CHECK(report.global_accuracy == 1.0);
    }
    SUBCASE("all-background prediction scores the background share") {
        // 10 segments, 7 background voxels out of 10.
        Labeling truth{{0, 1, 2, 9, 9, 9, 9, 9, 9, 9}};
        Labeling pred{std::vector<Index>(10, 9)};
        const std::vector<VoxelCount> sizes(10, 1);
        const EvalReport report = evaluate(pred, truth, sizes, 10);
        CHECK(report.global_accuracy == doctest::Approx(0.7));
    }
    SUBCASE("average is the mean over classes present in truth") {
        Labeling truth{{0, 0, 1, 1}};
        Labeling pred{{0, 0, 1, 0}};
        const std::vector<VoxelCount> sizes(4, 1);
        const EvalReport report = evaluate(pred, truth, sizes, 3);
        CHECK(report.per_class_accuracy(0) == 1.0);
        CHECK(report.per_class_accuracy(1) == 0.5);
        CHECK(report.average_per_class == doctest::Approx(0.75));
        CHECK(std::isnan(report.per_class_accuracy(2)));
    }
    SUBCASE("confusion rows sum to class voxel totals") {
        const SynthResult made = generate(standard_config(33, 0.4, 0.1));
        const Solution sol = infer(made.instance);
        const EvalReport report = evaluate(sol.labeling, made.truth, made.instance.graph.sizes,
                                           made.instance.labels.n_labels());
        std::vector<VoxelCount> per_class(made.instance.labels.n_labels(), 0);
        for (Index i = 0; i < made.instance.graph.n_segments; ++i)
            per_class[made.truth.joint[i]] += made.instance.graph.sizes[i];
        for (Index c = 0; c < made.instance.labels.n_labels(); ++c)
            CHECK(report.confusion.row(c).sum() == per_class[c]);
    }
    SUBCASE("mismatched lengths are rejected") {
        CHECK_THROWS_AS(evaluate(Labeling{{0}}, Labeling{{0, 1}}, {1, 1}, 3),
                        std::invalid_argument);
    }
}

#include "gpm/synth.hpp"

#include "gpm/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace gpm {

namespace {

struct PlantedObject {
    Index label = 0;       // joint label
    int x0 = 0, y0 = 0;    // position at frame 0
    int w = 0, h = 0;      // spatial extent, full temporal extent
    int vx = 0, vy = 0;    // voxels per frame
};

double tau_floor(const UnaryTables& u) {
    return 10.0 * (u.actor.cwiseAbs().sum() + u.action.cwiseAbs().sum() +
                   u.joint.cwiseAbs().sum());
}

} // namespace

SynthResult generate(const SynthConfig& config) {
    if (config.segment_block < 1)
        throw std::invalid_argument("synth: segment_block must be >= 1");
    if (config.width % config.segment_block || config.height % config.segment_block ||
        config.frames % config.segment_block)
        throw std::invalid_argument("synth: grid dimensions must be divisible by segment_block");
    if (config.tree_levels < 1) throw std::invalid_argument("synth: tree_levels must be >= 1");
    if (config.unary_noise < 0 || config.response_noise < 0)
        throw std::invalid_argument("synth: noise levels must be >= 0");
    if (config.actors.empty() || config.actions.empty())
        throw std::invalid_argument("synth: actors and actions must be nonempty");

    Instance inst;
    inst.labels.actors = config.actors;
    inst.labels.actions = config.actions;
    if (config.joint.empty()) {
        for (Index x = 0; x < inst.labels.n_actors(); ++x)
            for (Index y = 0; y < inst.labels.n_actions(); ++y)
                inst.labels.joint.emplace_back(x, y);
    } else {
        inst.labels.joint = config.joint;
    }
    const Index n_joint = inst.labels.n_joint();
    const Index background = inst.labels.background_label();

    std::mt19937_64 rng(config.seed);

    // Moving boxes spanning the full time extent; each carries one joint
    // label. Velocity is clamped so the whole trajectory stays in frame.
    std::vector<PlantedObject> objects;
    for (int k = 0; k < config.n_objects; ++k) {
        PlantedObject obj;
        obj.label = std::uniform_int_distribution<Index>(0, n_joint - 1)(rng);
        obj.w = std::uniform_int_distribution<int>(
            config.segment_block, std::max(config.segment_block, config.width / 2))(rng);
        obj.h = std::uniform_int_distribution<int>(
            config.segment_block, std::max(config.segment_block, config.height / 2))(rng);
        obj.vx = std::uniform_int_distribution<int>(-1, 1)(rng);
        obj.vy = std::uniform_int_distribution<int>(-1, 1)(rng);
        const int span_x = obj.w + std::abs(obj.vx) * (config.frames - 1);
        const int span_y = obj.h + std::abs(obj.vy) * (config.frames - 1);
        if (span_x > config.width || span_y > config.height)
            throw std::invalid_argument("synth: planted object cannot fit the grid");
        const int base_x = std::uniform_int_distribution<int>(0, config.width - span_x)(rng);
        const int base_y = std::uniform_int_distribution<int>(0, config.height - span_y)(rng);
        obj.x0 = obj.vx < 0 ? base_x - obj.vx * (config.frames - 1) : base_x;
        obj.y0 = obj.vy < 0 ? base_y - obj.vy * (config.frames - 1) : base_y;
        objects.push_back(obj);
    }

    const int blk = config.segment_block;
    const int bw = config.width / blk, bh = config.height / blk, bf = config.frames / blk;
    const Index n_segments = static_cast<Index>(bw) * bh * bf;
    auto block_index = [&](int x, int y, int f) {
        return static_cast<Index>(x + bw * (y + static_cast<Index>(bh) * f));
    };

    // A voxel belongs to the lowest-index object covering it; block labels are
    // plurality owners, ties to background then lower object index.
    auto owner_of = [&](int x, int y, int f) -> int {
        for (std::size_t k = 0; k < objects.size(); ++k) {
            const PlantedObject& o = objects[k];
            const int ox = o.x0 + o.vx * f, oy = o.y0 + o.vy * f;
            if (x >= ox && x < ox + o.w && y >= oy && y < oy + o.h) return static_cast<int>(k);
        }
        return -1;
    };
    std::vector<int> region(n_segments, -1);
    Labeling truth;
    truth.joint.assign(n_segments, background);
    for (int f = 0; f < bf; ++f)
        for (int y = 0; y < bh; ++y)
            for (int x = 0; x < bw; ++x) {
                std::vector<VoxelCount> votes(objects.size() + 1, 0); // slot 0 = background
                for (int dz = 0; dz < blk; ++dz)
                    for (int dy = 0; dy < blk; ++dy)
                        for (int dx = 0; dx < blk; ++dx)
                            ++votes[owner_of(x * blk + dx, y * blk + dy, f * blk + dz) + 1];
                int winner = 0;
                for (std::size_t k = 1; k < votes.size(); ++k)
                    if (votes[k] > votes[winner]) winner = static_cast<int>(k);
                const Index i = block_index(x, y, f);
                region[i] = winner - 1;
                truth.joint[i] = winner == 0 ? background : objects[winner - 1].label;
            }

    inst.graph.n_segments = n_segments;
    inst.graph.sizes.assign(n_segments, static_cast<VoxelCount>(blk) * blk * blk);
    inst.graph.frame_of.resize(n_segments);
    inst.geometry.width = config.width;
    inst.geometry.height = config.height;
    inst.geometry.frames = config.frames;
    inst.geometry.boxes.resize(n_segments);
    for (int f = 0; f < bf; ++f)
        for (int y = 0; y < bh; ++y)
            for (int x = 0; x < bw; ++x) {
                const Index i = block_index(x, y, f);
                inst.graph.frame_of[i] = f * blk;
                inst.geometry.boxes[i] = {x * blk,       y * blk,       f * blk,
                                          (x + 1) * blk, (y + 1) * blk, (f + 1) * blk};
            }

    // 6-neighborhood between blocks; contrast 1 inside a planted region,
    // 0 across region boundaries.
    for (int f = 0; f < bf; ++f)
        for (int y = 0; y < bh; ++y)
            for (int x = 0; x < bw; ++x) {
                const Index i = block_index(x, y, f);
                const Index right = x + 1 < bw ? block_index(x + 1, y, f) : -1;
                const Index down = y + 1 < bh ? block_index(x, y + 1, f) : -1;
                const Index next = f + 1 < bf ? block_index(x, y, f + 1) : -1;
                for (Index j : {right, down, next})
                    if (j >= 0)
                        inst.graph.edges.push_back(
                            {i, j, region[i] == region[j] ? 1.0 : 0.0});
            }

    // True label at energy 0, every other at 1, plus noise. Actor/action
    // tables carry no separate signal.
    inst.unaries.actor = Eigen::MatrixXd::Zero(n_segments, inst.labels.n_actors());
    inst.unaries.action = Eigen::MatrixXd::Zero(n_segments, inst.labels.n_actions());
    inst.unaries.joint.resize(n_segments, inst.labels.n_labels());
    std::normal_distribution<double> unary_noise(0.0, 1.0);
    for (Index i = 0; i < n_segments; ++i)
        for (Index l = 0; l < inst.labels.n_labels(); ++l) {
            double e = l == truth.joint[i] ? 0.0 : 1.0;
            if (config.unary_noise > 0) e += config.unary_noise * unary_noise(rng);
            inst.unaries.joint(i, l) = e;
        }

    std::vector<char> planted(n_joint, 0);
    for (const auto& obj : objects) planted[obj.label] = 1;
    inst.unaries.video_response.resize(n_joint);
    std::normal_distribution<double> response_noise(0.0, 1.0);
    for (Index z = 0; z < n_joint; ++z) {
        double r = planted[z] ? 1.0 : 0.0;
        if (config.response_noise > 0) r += config.response_noise * response_noise(rng);
        inst.unaries.video_response(z) = r;
    }

    // Hierarchy: level k merges 2^(k+1) x 2^(k+1) x 2^(k+1) blocks, split by
    // planted region so supervoxels track objects instead of cutting across
    // their boundaries (the same way appearance-driven supervoxels follow
    // object edges).
    std::vector<std::vector<Index>> levels(config.tree_levels);
    for (int k = 0; k < config.tree_levels; ++k) {
        const int factor = 1 << (k + 1);
        const int gw = (bw + factor - 1) / factor;
        const int gh = (bh + factor - 1) / factor;
        const auto n_regions = static_cast<Index>(objects.size()) + 1;
        levels[k].resize(n_segments);
        for (int f = 0; f < bf; ++f)
            for (int y = 0; y < bh; ++y)
                for (int x = 0; x < bw; ++x) {
                    const Index i = block_index(x, y, f);
                    const Index cell = static_cast<Index>(
                        x / factor + gw * (y / factor + static_cast<Index>(gh) * (f / factor)));
                    levels[k][i] = cell * n_regions + (region[i] + 1);
                }
    }
    inst.tree = build_tree(levels, inst.graph.sizes);

    inst.params = config.params;
    inst.params.theta_tau = std::max(inst.params.theta_tau, tau_floor(inst.unaries) + 1.0);
    inst.ground_truth = truth.joint;

    return {std::move(inst), std::move(truth)};
}

Instance corrupt(const Instance& inst, const Labeling& truth, double flip_fraction,
                 std::uint64_t seed) {
    if (flip_fraction < 0 || flip_fraction > 1)
        throw std::invalid_argument("corrupt: flip_fraction must be in [0, 1]");
    Instance out = inst;
    const Index n = inst.graph.n_segments;
    const auto k = static_cast<Index>(std::llround(flip_fraction * n));
    if (k == 0) return out;

    std::mt19937_64 rng(seed);
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    const Index n_labels = inst.labels.n_labels();
    for (Index pick = 0; pick < k; ++pick) {
        const Index i = order[pick];
        // Wrong label drawn uniformly from everything but the truth.
        Index wrong = std::uniform_int_distribution<Index>(0, n_labels - 2)(rng);
        if (wrong >= truth.joint[i]) ++wrong;
        for (Index l = 0; l < n_labels; ++l) out.unaries.joint(i, l) = l == wrong ? 0.0 : 1.0;
    }
    out.params.theta_tau = std::max(out.params.theta_tau, tau_floor(out.unaries) + 1.0);
    return out;
}

} // namespace gpm

#pragma once

#include "gpm/instance.hpp"

namespace gpm {

/// Planted-truth generator configuration. The voxel grid is cut into cubic
/// blocks of edge segment_block (one segment per block); moving boxes carry
/// one joint label each and the rest is background.
struct SynthConfig {
    int width = 16, height = 16, frames = 8;
    int segment_block = 2;
    int n_objects = 2;
    std::vector<std::string> actors = {"cat", "dog", "bird"};
    std::vector<std::string> actions = {"run", "walk", "fly"};
    std::vector<std::pair<Index, Index>> joint; // empty = full product
    int tree_levels = 3;
    double unary_noise = 0.0;
    double response_noise = 0.0;
    std::uint64_t seed = 0;
    Params params;
};

struct SynthResult {
    Instance instance;
    Labeling truth;
};

/// Plants n_objects axis-aligned moving boxes, labels segments by plurality
/// voxel ownership, sets the true label's unary to 0 and every other to 1
/// (plus Gaussian noise), emits video responses of 1 for planted pairs and 0
/// otherwise (plus noise), and builds the hierarchy by repeated 2x spatial
/// merging of blocks. Edge contrast is 1 within a planted region and 0
/// across region boundaries. The result always passes validate_instance and
/// carries the truth both in the instance and as a separate labeling.
SynthResult generate(const SynthConfig& config);

/// Rewrites the unary rows of a flip_fraction subset of segments so the
/// argmin lands on a uniformly chosen wrong label (0 there, 1 elsewhere, no
/// noise). Everything else is left intact.
Instance corrupt(const Instance& inst, const Labeling& truth, double flip_fraction,
                 std::uint64_t seed);

} // namespace gpm

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace gpm {

using Index = std::int32_t;
using VoxelCount = std::int64_t;

/// Per-segment joint actor-action assignment. Entries index the joint label
/// space; the value n_joint (one past the last pair) is the background label.
struct Labeling {
    std::vector<Index> joint;

    Index size() const { return static_cast<Index>(joint.size()); }
    bool operator==(const Labeling&) const = default;
};

/// Binary activation over supervoxel tree nodes.
struct Slice {
    std::vector<std::uint8_t> active;

    Index size() const { return static_cast<Index>(active.size()); }
    int count_active() const;
    bool operator==(const Slice&) const = default;
};

/// Binary activation over joint actor-action classes at the video level.
struct VideoLabels {
    std::vector<std::uint8_t> active;

    Index size() const { return static_cast<Index>(active.size()); }
    bool operator==(const VideoLabels&) const = default;
};

} // namespace gpm

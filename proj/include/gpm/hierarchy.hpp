#pragma once

#include "gpm/types.hpp"

namespace gpm {

/// Rooted supervoxel tree over the segment set. Node ids are dense; parent of
/// the root is -1. Each node knows the segment indices it covers (members),
/// its voxel size (sum of member segment sizes) and its hierarchy level
/// (0 = finest). Leaf members come from the finest segmentation; internal
/// members are the union of the children's members.
struct SupervoxelTree {
    Index n_nodes = 0;
    std::vector<Index> parent;                 // -1 for the root
    std::vector<std::vector<Index>> children;
    std::vector<std::vector<Index>> members;   // sorted segment indices
    std::vector<VoxelCount> size;
    std::vector<int> level;
    std::vector<Index> leaf_of;                // per segment: its leaf node

    Index root() const;
    bool is_leaf(Index t) const { return children[t].empty(); }
    bool is_virtual_root(Index t) const { return virtual_root && t == root(); }
    bool virtual_root = false;
};

/// Root-to-leaf incidence: one row per leaf, listing the node ids on the path
/// from the root down to that leaf (inclusive).
struct PathMatrix {
    std::vector<std::vector<Index>> paths;
    Index n_leaves = 0;
};

/// Builds the tree from flat segmentations. `levels[k][i]` is the supervoxel
/// id of segment i at level k; levels are stable-sorted fine-to-coarse by
/// distinct supervoxel count before linking. Each finer supervoxel is linked
/// to the coarser supervoxel with maximal voxel overlap (ties to the lowest
/// coarse id). A virtual root covering everything is appended when the
/// coarsest level has more than one supervoxel.
SupervoxelTree build_tree(const std::vector<std::vector<Index>>& levels,
                          const std::vector<VoxelCount>& segment_sizes);

PathMatrix path_matrix(const SupervoxelTree& tree);

/// Segment index set covered by node t. Throws std::out_of_range for bad t.
const std::vector<Index>& members_of(const SupervoxelTree& tree, Index t);

/// Recomputes members/size from leaf_of + parent links (used after
/// deserialization, where only the link structure is stored).
void rebuild_derived(SupervoxelTree& tree, const std::vector<VoxelCount>& segment_sizes);

/// Parses one flat segmentation level from its text-table form: one
/// "segment_id supervoxel_id" row per segment ('#' starts a comment). Rows
/// may appear in any order but must cover segments 0..max exactly once.
std::vector<Index> parse_flat_segmentation(const std::string& text);

} // namespace gpm

#include "gpm/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gpm {

Index SupervoxelTree::root() const {
    for (Index t = 0; t < n_nodes; ++t)
        if (parent[t] < 0) return t;
    throw std::logic_error("tree has no root");
}

namespace {

// Distinct supervoxel ids of one flat level, ascending.
std::vector<Index> distinct_ids(const std::vector<Index>& level) {
    std::vector<Index> ids(level);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

void fill_members_and_sizes(SupervoxelTree& tree, const std::vector<VoxelCount>& sizes) {
    const Index n_segments = static_cast<Index>(tree.leaf_of.size());
    tree.members.assign(tree.n_nodes, {});
    for (Index i = 0; i < n_segments; ++i) {
        const Index leaf = tree.leaf_of[i];
        if (leaf >= 0 && leaf < tree.n_nodes) tree.members[leaf].push_back(i);
    }
    // Union children's members bottom-up, children strictly before parents.
    std::vector<Index> order;
    order.reserve(tree.n_nodes);
    std::vector<Index> stack;
    for (Index t = 0; t < tree.n_nodes; ++t)
        if (tree.parent[t] < 0) stack.push_back(t);
    while (!stack.empty()) { // reverse pre-order; reversed again below
        const Index t = stack.back();
        stack.pop_back();
        order.push_back(t);
        for (Index c : tree.children[t]) stack.push_back(c);
    }
    std::reverse(order.begin(), order.end());
    for (Index t : order) {
        if (tree.children[t].empty()) continue;
        std::vector<Index> merged = tree.members[t]; // loaded leaves may sit mid-tree
        for (Index c : tree.children[t])
            merged.insert(merged.end(), tree.members[c].begin(), tree.members[c].end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        tree.members[t] = std::move(merged);
    }
    tree.size.assign(tree.n_nodes, 0);
    for (Index t = 0; t < tree.n_nodes; ++t) {
        for (Index i : tree.members[t]) tree.size[t] += sizes[i];
        std::sort(tree.members[t].begin(), tree.members[t].end());
    }
}

} // namespace

SupervoxelTree build_tree(const std::vector<std::vector<Index>>& levels,
                          const std::vector<VoxelCount>& segment_sizes) {
    if (levels.empty()) throw std::invalid_argument("build_tree: no levels given");
    const Index n_segments = static_cast<Index>(segment_sizes.size());
    for (const auto& level : levels) {
        if (static_cast<Index>(level.size()) != n_segments)
            throw std::invalid_argument("build_tree: level does not assign every segment");
        if (level.empty()) throw std::invalid_argument("build_tree: level with zero supervoxels");
    }

    // Fine-to-coarse: descending distinct count, input position for ties.
    std::vector<std::size_t> order(levels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::size_t> counts(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) counts[k] = distinct_ids(levels[k]).size();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

    const std::size_t n_levels = levels.size();
    // Dense node ids per level, ordered by raw supervoxel id.
    std::vector<std::map<Index, Index>> node_of(n_levels);
    SupervoxelTree tree;
    for (std::size_t k = 0; k < n_levels; ++k) {
        for (Index raw : distinct_ids(levels[order[k]])) {
            node_of[k][raw] = tree.n_nodes++;
            tree.level.push_back(static_cast<int>(k));
        }
    }
    tree.parent.assign(tree.n_nodes, -1);

    // Parent of each fine supervoxel: the coarse one with maximal voxel
    // overlap, ties to the lowest coarse id.
    for (std::size_t k = 0; k + 1 < n_levels; ++k) {
        const auto& fine = levels[order[k]];
        const auto& coarse = levels[order[k + 1]];
        std::map<std::pair<Index, Index>, VoxelCount> overlap;
        for (Index i = 0; i < n_segments; ++i)
            overlap[{fine[i], coarse[i]}] += segment_sizes[i];
        std::map<Index, std::pair<VoxelCount, Index>> best; // fine raw id -> (overlap, coarse raw id)
        for (const auto& [key, vox] : overlap) {
            auto it = best.find(key.first);
            if (it == best.end() || vox > it->second.first)
                best[key.first] = {vox, key.second};
        }
        for (const auto& [fine_raw, hit] : best)
            tree.parent[node_of[k].at(fine_raw)] = node_of[k + 1].at(hit.second);
    }

    // One virtual node as root when the coarsest level is not a single
    // supervoxel.
    const std::size_t top = n_levels - 1;
    if (node_of[top].size() > 1) {
        const Index root = tree.n_nodes++;
        tree.level.push_back(static_cast<int>(n_levels));
        tree.parent.push_back(-1);
        for (const auto& [raw, node] : node_of[top]) tree.parent[node] = root;
        tree.virtual_root = true;
    }

    tree.leaf_of.assign(n_segments, -1);
    for (Index i = 0; i < n_segments; ++i)
        tree.leaf_of[i] = node_of[0].at(levels[order[0]][i]);

    tree.children.assign(tree.n_nodes, {});
    for (Index t = 0; t < tree.n_nodes; ++t)
        if (tree.parent[t] >= 0) tree.children[tree.parent[t]].push_back(t);

    fill_members_and_sizes(tree, segment_sizes);
    return tree;
}

void rebuild_derived(SupervoxelTree& tree, const std::vector<VoxelCount>& segment_sizes) {
    tree.children.assign(tree.n_nodes, {});
    for (Index t = 0; t < tree.n_nodes; ++t) {
        const Index p = tree.parent[t];
        if (p < -1 || p >= tree.n_nodes)
            throw std::runtime_error("tree parent index out of range");
        if (p >= 0) tree.children[p].push_back(t);
    }
    // Reject cycles: every node must reach a root by parent chasing.
    for (Index t = 0; t < tree.n_nodes; ++t) {
        Index cur = t;
        for (Index hops = 0; cur >= 0; ++hops) {
            if (hops > tree.n_nodes) throw std::runtime_error("tree parent links contain a cycle");
            cur = tree.parent[cur];
        }
    }
    fill_members_and_sizes(tree, segment_sizes);
}

PathMatrix path_matrix(const SupervoxelTree& tree) {
    PathMatrix pm;
    for (Index t = 0; t < tree.n_nodes; ++t) {
        if (!tree.is_leaf(t)) continue;
        std::vector<Index> path;
        for (Index cur = t; cur >= 0; cur = tree.parent[cur]) path.push_back(cur);
        std::reverse(path.begin(), path.end());
        pm.paths.push_back(std::move(path));
    }
    pm.n_leaves = static_cast<Index>(pm.paths.size());
    return pm;
}

const std::vector<Index>& members_of(const SupervoxelTree& tree, Index t) {
    if (t < 0 || t >= tree.n_nodes) throw std::out_of_range("members_of: node index out of range");
    return tree.members[t];
}

std::vector<Index> parse_flat_segmentation(const std::string& text) {
    std::map<Index, Index> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        Index segment, supervoxel;
        if (!(fields >> segment)) continue; // blank or comment-only line
        if (!(fields >> supervoxel) || segment < 0 || supervoxel < 0)
            throw std::invalid_argument("flat segmentation: malformed row '" + line + "'");
        if (!rows.emplace(segment, supervoxel).second)
            throw std::invalid_argument("flat segmentation: duplicate segment " +
                                        std::to_string(segment));
    }
    if (rows.empty()) throw std::invalid_argument("flat segmentation: no rows");
    std::vector<Index> level(rows.rbegin()->first + 1, -1);
    for (const auto& [segment, supervoxel] : rows) level[segment] = supervoxel;
    for (std::size_t i = 0; i < level.size(); ++i)
        if (level[i] < 0)
            throw std::invalid_argument("flat segmentation: segment " + std::to_string(i) +
                                        " is not assigned");
    return level;
}

} // namespace gpm

#include "gpm/slice_solver.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gpm {

SliceCosts slice_costs(const Labeling& L, const Instance& inst) {
    SliceCosts costs;
    costs.alpha.resize(inst.tree.n_nodes);
    for (Index t = 0; t < inst.tree.n_nodes; ++t)
        costs.alpha(t) = label_entropy(inst, t, L) * static_cast<double>(inst.tree.size[t]) +
                         inst.params.theta_h;
    return costs;
}

double slice_objective(const Slice& s, const SliceCosts& costs) {
    double obj = 0.0;
    for (Index t = 0; t < static_cast<Index>(s.active.size()); ++t)
        if (s.active[t]) obj += costs.alpha(t);
    return obj;
}

bool is_valid_slice(const Slice& s, const PathMatrix& pm) {
    for (const auto& path : pm.paths) {
        int active = 0;
        for (Index t : path) active += s.active[t] ? 1 : 0;
        if (active != 1) return false;
    }
    return true;
}

Slice solve_slice_dp(const SupervoxelTree& tree, const SliceCosts& costs) {
    if (costs.alpha.size() != tree.n_nodes)
        throw std::invalid_argument("solve_slice_dp: cost vector length mismatch");

    std::vector<double> best(tree.n_nodes, 0.0);
    std::vector<char> take(tree.n_nodes, 0);

    // Children before parents.
    std::vector<Index> order;
    order.reserve(tree.n_nodes);
    std::vector<Index> stack{tree.root()};
    while (!stack.empty()) {
        const Index t = stack.back();
        stack.pop_back();
        order.push_back(t);
        for (Index c : tree.children[t]) stack.push_back(c);
    }
    std::reverse(order.begin(), order.end());

    for (Index t : order) {
        if (tree.is_leaf(t)) {
            best[t] = costs.alpha(t);
            take[t] = 1;
            continue;
        }
        double below = 0.0;
        for (Index c : tree.children[t]) below += best[c];
        // On a tie the single coarser node wins.
        take[t] = costs.alpha(t) <= below;
        best[t] = take[t] ? costs.alpha(t) : below;
    }

    Slice slice;
    slice.active.assign(tree.n_nodes, 0);
    stack.assign(1, tree.root());
    while (!stack.empty()) {
        const Index t = stack.back();
        stack.pop_back();
        if (take[t]) {
            slice.active[t] = 1;
            continue;
        }
        for (Index c : tree.children[t]) stack.push_back(c);
    }
    return slice;
}

Slice brute_force_slice(const SupervoxelTree& tree, const SliceCosts& costs) {
    if (tree.n_nodes > 22)
        throw std::invalid_argument("brute_force_slice: tree too large (max 22 nodes)");
    const PathMatrix pm = path_matrix(tree);
    const std::uint32_t limit = 1u << tree.n_nodes;

    Slice best;
    double best_obj = 0.0;
    bool found = false;
    Slice candidate;
    candidate.active.assign(tree.n_nodes, 0);
    // Counting up enumerates lexicographically smallest-first with node 0 as
    // the most significant position, so the first strict improvement keeps
    // the stated tie rule.
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        for (Index t = 0; t < tree.n_nodes; ++t)
            candidate.active[t] = (mask >> (tree.n_nodes - 1 - t)) & 1u;
        if (!is_valid_slice(candidate, pm)) continue;
        const double obj = slice_objective(candidate, costs);
        if (!found || obj < best_obj) {
            best = candidate;
            best_obj = obj;
            found = true;
        }
    }
    if (!found) throw std::logic_error("brute_force_slice: no valid slice exists");
    return best;
}

std::string export_blp(const SupervoxelTree& tree, const SliceCosts& costs) {
    const PathMatrix pm = path_matrix(tree);
    std::ostringstream os;
    os.precision(17);
    os << "\\ tree-slice selection as a binary linear program\n";
    os << "Minimize\n obj:";
    for (Index t = 0; t < tree.n_nodes; ++t) {
        const double a = costs.alpha(t);
        os << (a < 0 ? " - " : (t == 0 ? " " : " + ")) << std::abs(a) << " s" << t;
    }
    os << "\nSubject To\n";
    for (Index p = 0; p < pm.n_leaves; ++p) {
        os << " path" << p << ":";
        for (std::size_t k = 0; k < pm.paths[p].size(); ++k)
            os << (k == 0 ? " " : " + ") << "s" << pm.paths[p][k];
        os << " = 1\n";
    }
    os << "Binary\n";
    for (Index t = 0; t < tree.n_nodes; ++t) os << " s" << t;
    os << "\nEnd\n";
    return os.str();
}

} // namespace gpm

#include "gpm/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace gpm {

int Slice::count_active() const {
    int n = 0;
    for (auto a : active) n += a ? 1 : 0;
    return n;
}

std::string LabelSpace::label_name(Index label) const {
    if (label == background_label()) return background;
    return actors[joint[label].first] + "-" + actions[joint[label].second];
}

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

void check_labels(const LabelSpace& ls, ValidationReport& r) {
    if (ls.joint.empty()) r.violations.push_back("label space must contain at least one joint pair");
    std::set<std::pair<Index, Index>> seen;
    for (const auto& [x, y] : ls.joint) {
        if (x < 0 || x >= ls.n_actors() || y < 0 || y >= ls.n_actions())
            r.violations.push_back("joint pair references an invalid actor or action index");
        if (!seen.insert({x, y}).second)
            r.violations.push_back("duplicate joint pair");
    }
}

void check_graph(const SegmentGraph& g, ValidationReport& r) {
    if (g.n_segments < 1) r.violations.push_back("graph must contain at least one segment");
    if (static_cast<Index>(g.sizes.size()) != g.n_segments)
        r.violations.push_back("segment size list length mismatch");
    for (auto s : g.sizes)
        if (s < 1) {
            r.violations.push_back("segment sizes must be >= 1");
            break;
        }
    if (!g.frame_of.empty() && static_cast<Index>(g.frame_of.size()) != g.n_segments)
        r.violations.push_back("frame_of length mismatch");
    std::set<std::pair<Index, Index>> seen;
    for (const auto& e : g.edges) {
        if (e.i < 0 || e.i >= g.n_segments || e.j < 0 || e.j >= g.n_segments) {
            r.violations.push_back("edge endpoint out of range");
            continue;
        }
        if (e.i == e.j) r.violations.push_back("self-loop edge");
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
            r.violations.push_back("edge weight must be finite and >= 0");
        auto key = std::minmax(e.i, e.j);
        if (!seen.insert({key.first, key.second}).second) r.violations.push_back("duplicate edge");
    }
}

void check_unaries(const Instance& inst, ValidationReport& r) {
    const auto& u = inst.unaries;
    const Index n = inst.graph.n_segments;
    if (u.actor.rows() != n || u.actor.cols() != inst.labels.n_actors())
        r.violations.push_back("actor unary table dimension mismatch");
    if (u.action.rows() != n || u.action.cols() != inst.labels.n_actions())
        r.violations.push_back("action unary table dimension mismatch");
    if (u.joint.rows() != n || u.joint.cols() != inst.labels.n_labels())
        r.violations.push_back("joint unary table dimension mismatch");
    if (u.video_response.size() != inst.labels.n_joint())
        r.violations.push_back("video response length mismatch");
    if (!all_finite(u.actor) || !all_finite(u.action) || !all_finite(u.joint) ||
        !u.video_response.allFinite())
        r.violations.push_back("unary tables must be finite");
}

double total_unary_mass(const UnaryTables& u) {
    return u.actor.cwiseAbs().sum() + u.action.cwiseAbs().sum() + u.joint.cwiseAbs().sum();
}

void check_params(const Instance& inst, ValidationReport& r) {
    const Params& p = inst.params;
    for (double v : {p.theta_t, p.theta_h, p.theta_tau, p.theta_T, p.theta_B, p.theta_V,
                     p.potts_actor, p.potts_action, p.epsilon})
        if (!std::isfinite(v)) {
            r.violations.push_back("parameters must be finite");
            break;
        }
    if (p.theta_t < 0) r.violations.push_back("theta_t must be >= 0");
    if (p.theta_h < 0) r.violations.push_back("theta_h must be >= 0");
    if (p.theta_B <= 0) r.violations.push_back("theta_B must be > 0");
    if (p.theta_V < 0) r.violations.push_back("theta_V must be >= 0");
    if (p.potts_actor < 0 || p.potts_action < 0)
        r.violations.push_back("potts strengths must be >= 0");
    if (p.max_iters < 0) r.violations.push_back("max_iters must be >= 0");
    if (p.epsilon < 0) r.violations.push_back("epsilon must be >= 0");
    if (!(p.theta_B > 2.0 * p.theta_V)) r.violations.push_back("theta_B must exceed 2*theta_V");
    const double floor = 10.0 * total_unary_mass(inst.unaries);
    if (p.theta_tau < floor) {
        std::ostringstream os;
        os << "theta_tau must be >= 10x total absolute unary mass (" << floor << ")";
        r.violations.push_back(os.str());
    }
}

void check_tree(const Instance& inst, ValidationReport& r) {
    const SupervoxelTree& t = inst.tree;
    const Index n = inst.graph.n_segments;
    if (t.n_nodes < 1) {
        r.violations.push_back("tree must contain at least one node");
        return;
    }
    int roots = 0;
    for (Index k = 0; k < t.n_nodes; ++k) {
        if (t.parent[k] == -1) ++roots;
        else if (t.parent[k] < 0 || t.parent[k] >= t.n_nodes)
            r.violations.push_back("tree parent index out of range");
    }
    if (roots != 1) r.violations.push_back("tree must have exactly one root");

    if (static_cast<Index>(t.leaf_of.size()) != n) {
        r.violations.push_back("leaf coverage: leaf_of length mismatch");
        return;
    }
    for (Index i = 0; i < n; ++i) {
        const Index leaf = t.leaf_of[i];
        if (leaf < 0 || leaf >= t.n_nodes || !t.is_leaf(leaf)) {
            std::ostringstream os;
            os << "leaf coverage: segment " << i << " is not assigned to a leaf supervoxel";
            r.violations.push_back(os.str());
        }
    }
    for (Index k = 0; k < t.n_nodes; ++k) {
        if (t.is_leaf(k) && t.members[k].empty())
            r.violations.push_back("tree leaf with no member segments");
        if (!t.is_leaf(k)) {
            std::vector<Index> merged;
            for (Index c : t.children[k])
                merged.insert(merged.end(), t.members[c].begin(), t.members[c].end());
            std::sort(merged.begin(), merged.end());
            if (merged != t.members[k])
                r.violations.push_back("tree node members differ from the union of its children");
        }
        VoxelCount vox = 0;
        for (Index i : t.members[k])
            if (i >= 0 && i < n) vox += inst.graph.sizes[i];
        if (vox != t.size[k]) r.violations.push_back("tree node size differs from its members' total");
    }
}

void check_geometry(const Instance& inst, ValidationReport& r) {
    const Geometry& g = inst.geometry;
    if (g.empty()) return;
    if (static_cast<Index>(g.boxes.size()) != inst.graph.n_segments) {
        r.violations.push_back("geometry box count mismatch");
        return;
    }
    for (Index i = 0; i < inst.graph.n_segments; ++i) {
        const auto& b = g.boxes[i];
        const VoxelCount vol = VoxelCount(b[3] - b[0]) * (b[4] - b[1]) * (b[5] - b[2]);
        if (b[0] < 0 || b[1] < 0 || b[2] < 0 || b[3] > g.width || b[4] > g.height ||
            b[5] > g.frames || vol < 1)
            r.violations.push_back("geometry box out of grid bounds");
        else if (vol != inst.graph.sizes[i])
            r.violations.push_back("geometry box volume differs from segment size");
    }
}

} // namespace

ValidationReport validate_instance(const Instance& inst) {
    ValidationReport r;
    check_labels(inst.labels, r);
    check_graph(inst.graph, r);
    check_unaries(inst, r);
    check_params(inst, r);
    check_tree(inst, r);
    check_geometry(inst, r);
    if (!inst.ground_truth.empty()) {
        if (static_cast<Index>(inst.ground_truth.size()) != inst.graph.n_segments)
            r.violations.push_back("ground truth length mismatch");
        for (Index l : inst.ground_truth)
            if (l < 0 || l >= inst.labels.n_labels()) {
                r.violations.push_back("ground truth label out of range");
                break;
            }
    }
    return r;
}

} // namespace gpm

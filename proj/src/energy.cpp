#include "gpm/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace gpm {

double unary_energy(const Instance& inst, Index i, Index label) {
    const LabelSpace& ls = inst.labels;
    double e = inst.unaries.joint(i, label);
    if (label != ls.background_label()) {
        e += inst.unaries.actor(i, ls.joint[label].first);
        e += inst.unaries.action(i, ls.joint[label].second);
    }
    return e;
}

double pair_energy(const Instance& inst, double w, Index a, Index b) {
    const LabelSpace& ls = inst.labels;
    const bool actor_differs = ls.actor_of(a) != ls.actor_of(b);
    const bool action_differs = ls.action_of(a) != ls.action_of(b);
    const double psi = inst.params.potts_actor * w;
    const double phi = inst.params.potts_action * w;
    if (actor_differs && action_differs) return psi * phi;
    if (actor_differs) return psi;
    if (action_differs) return phi;
    return 0.0;
}

bool actor_supported(const Instance& inst, const VideoLabels& v, Index x) {
    if (x < 0) return false; // null is never video-supported
    for (Index z = 0; z < inst.labels.n_joint(); ++z)
        if (v.active[z] && inst.labels.joint[z].first == x) return true;
    return false;
}

bool action_supported(const Instance& inst, const VideoLabels& v, Index y) {
    if (y < 0) return false;
    for (Index z = 0; z < inst.labels.n_joint(); ++z)
        if (v.active[z] && inst.labels.joint[z].second == y) return true;
    return false;
}

namespace {

// Majority vote over projections; ties to the lowest index, null (-1) first.
Index dominant_projection(const Instance& inst, Index t, const Labeling& L, bool actor) {
    const auto& members = members_of(inst.tree, t);
    std::vector<int> count(inst.labels.n_actors() + inst.labels.n_actions() + 1, 0);
    auto slot = [&](Index proj) { return proj + 1; }; // -1 -> 0
    for (Index i : members) {
        const Index label = L.joint[i];
        const Index proj = actor ? inst.labels.actor_of(label) : inst.labels.action_of(label);
        ++count[slot(proj)];
    }
    const Index n_classes = actor ? inst.labels.n_actors() : inst.labels.n_actions();
    Index best = -1;
    int best_count = -1;
    for (Index c = 0; c < n_classes; ++c)
        if (count[slot(c)] > best_count) {
            best = c;
            best_count = count[slot(c)];
        }
    if (count[slot(-1)] > best_count) best = -1; // background label sorts last
    return best;
}

} // namespace

Index dominant_actor(const Instance& inst, Index t, const Labeling& L) {
    return dominant_projection(inst, t, L, true);
}

Index dominant_action(const Instance& inst, Index t, const Labeling& L) {
    return dominant_projection(inst, t, L, false);
}

double label_entropy(const Instance& inst, Index t, const Labeling& L) {
    const auto& members = members_of(inst.tree, t);
    if (members.empty()) return 0.0;
    std::vector<int> count(inst.labels.n_labels(), 0);
    for (Index i : members) ++count[L.joint[i]];
    const double total = static_cast<double>(members.size());
    double h = 0.0;
    for (int c : count) {
        if (c == 0) continue;
        const double p = c / total;
        h -= p * std::log(p);
    }
    return h;
}

double segment_crf_energy(const Labeling& L, const Instance& inst) {
    double e = 0.0;
    for (Index i = 0; i < inst.graph.n_segments; ++i) e += unary_energy(inst, i, L.joint[i]);
    for (const auto& edge : inst.graph.edges)
        e += pair_energy(inst, edge.weight, L.joint[edge.i], L.joint[edge.j]);
    return e;
}

double video_level_energy(const Labeling& L, const VideoLabels& v, const Instance& inst) {
    const LabelSpace& ls = inst.labels;
    const Params& p = inst.params;
    double e = 0.0;
    for (Index z = 0; z < ls.n_joint(); ++z)
        if (v.active[z]) e += -(inst.unaries.video_response(z) - p.theta_T) * p.theta_B;

    // One cost per class present in L but unsupported by v; background
    // contributes to no presence indicator.
    std::vector<char> actor_present(ls.n_actors(), 0), action_present(ls.n_actions(), 0);
    for (Index i = 0; i < inst.graph.n_segments; ++i) {
        const Index label = L.joint[i];
        if (label == ls.background_label()) continue;
        actor_present[ls.joint[label].first] = 1;
        action_present[ls.joint[label].second] = 1;
    }
    for (Index x = 0; x < ls.n_actors(); ++x)
        if (actor_present[x] && !actor_supported(inst, v, x)) e += p.theta_V;
    for (Index y = 0; y < ls.n_actions(); ++y)
        if (action_present[y] && !action_supported(inst, v, y)) e += p.theta_V;
    return e;
}

double grouping_energy(Index t, const Labeling& L, bool active, const Instance& inst) {
    if (!active) return 0.0;
    return label_entropy(inst, t, L) * static_cast<double>(inst.tree.size[t]) +
           inst.params.theta_h;
}

double slice_penalty(const Slice& s, const PathMatrix& pm, const Instance& inst) {
    int violated = 0;
    for (const auto& path : pm.paths) {
        int active = 0;
        for (Index t : path) active += s.active[t] ? 1 : 0;
        if (active != 1) ++violated;
    }
    return inst.params.theta_tau * violated;
}

double gpm_refine_energy(Index t, const Labeling& L, const VideoLabels& v, bool active,
                         const Instance& inst) {
    if (!active) return 0.0;
    const auto& members = members_of(inst.tree, t);
    const bool actor_gate = actor_supported(inst, v, dominant_actor(inst, t, L));
    const bool action_gate = action_supported(inst, v, dominant_action(inst, t, L));
    if (!actor_gate && !action_gate) return 0.0;
    const LabelSpace& ls = inst.labels;
    double e = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const Index la = L.joint[members[a]], lb = L.joint[members[b]];
            if (actor_gate && ls.actor_of(la) != ls.actor_of(lb)) e += inst.params.theta_t;
            if (action_gate && ls.action_of(la) != ls.action_of(lb)) e += inst.params.theta_t;
        }
    }
    return e;
}

double total_energy(const Labeling& L, const Slice& s, const VideoLabels& v,
                    const Instance& inst) {
    if (L.size() != inst.graph.n_segments || s.size() != inst.tree.n_nodes ||
        v.size() != inst.labels.n_joint())
        throw std::invalid_argument("total_energy: dimension mismatch");
    const PathMatrix pm = path_matrix(inst.tree);
    double e = segment_crf_energy(L, inst) + video_level_energy(L, v, inst) +
               slice_penalty(s, pm, inst);
    for (Index t = 0; t < inst.tree.n_nodes; ++t) {
        e += gpm_refine_energy(t, L, v, s.active[t], inst);
        e += grouping_energy(t, L, s.active[t], inst);
    }
    return e;
}

} // namespace gpm

#include "gpm/label_solver.hpp"

#include "gpm/max_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace gpm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double label_cost_of(const ExpansionProblem& p, const Labeling& L) {
    std::vector<char> actor_present(p.actor_cost.size(), 0);
    std::vector<char> action_present(p.action_cost.size(), 0);
    for (Index i = 0; i < p.n_nodes; ++i) {
        const Index a = p.label_actor[L.joint[i]];
        const Index b = p.label_action[L.joint[i]];
        if (a >= 0) actor_present[a] = 1;
        if (b >= 0) action_present[b] = 1;
    }
    double cost = 0.0;
    for (Index x = 0; x < p.actor_cost.size(); ++x)
        if (actor_present[x]) cost += p.actor_cost(x);
    for (Index y = 0; y < p.action_cost.size(); ++y)
        if (action_present[y]) cost += p.action_cost(y);
    return cost;
}

} // namespace

double ExpansionProblem::energy(const Labeling& L) const {
    if (L.size() != n_nodes) throw std::invalid_argument("energy: labeling length mismatch");
    double e = 0.0;
    for (Index i = 0; i < n_nodes; ++i) e += unary(i, L.joint[i]);
    for (const auto& term : crf_edges) e += term.table(L.joint[term.i], L.joint[term.j]);
    for (const auto& term : group_edges) e += term.table(L.joint[term.i], L.joint[term.j]);
    return e + label_cost_of(*this, L);
}

ExpansionProblem build_expansion_problem(const Instance& inst, const Slice& s,
                                         const VideoLabels& v, const Labeling& current) {
    const LabelSpace& ls = inst.labels;
    ExpansionProblem p;
    p.n_nodes = inst.graph.n_segments;
    p.n_labels = ls.n_labels();

    p.label_actor.resize(p.n_labels);
    p.label_action.resize(p.n_labels);
    for (Index l = 0; l < p.n_labels; ++l) {
        p.label_actor[l] = ls.actor_of(l);
        p.label_action[l] = ls.action_of(l);
    }

    p.unary.resize(p.n_nodes, p.n_labels);
    for (Index i = 0; i < p.n_nodes; ++i)
        for (Index l = 0; l < p.n_labels; ++l) p.unary(i, l) = unary_energy(inst, i, l);

    for (const auto& edge : inst.graph.edges) {
        PairwiseTerm term{edge.i, edge.j, Eigen::MatrixXd(p.n_labels, p.n_labels)};
        for (Index a = 0; a < p.n_labels; ++a)
            for (Index b = 0; b < p.n_labels; ++b)
                term.table(a, b) = pair_energy(inst, edge.weight, a, b);
        p.crf_edges.push_back(std::move(term));
    }

    // Fully connected member cliques of the active nodes, with the Potts
    // components gated by whether the (frozen) dominant label is
    // video-supported. Parallel pairs from overlapping actives merge by sum.
    std::map<std::pair<Index, Index>, Eigen::MatrixXd> merged;
    for (Index t = 0; t < inst.tree.n_nodes; ++t) {
        if (!s.active[t]) continue;
        const bool actor_gate = actor_supported(inst, v, dominant_actor(inst, t, current));
        const bool action_gate = action_supported(inst, v, dominant_action(inst, t, current));
        Eigen::MatrixXd table(p.n_labels, p.n_labels);
        for (Index a = 0; a < p.n_labels; ++a)
            for (Index b = 0; b < p.n_labels; ++b) {
                double e = 0.0;
                if (actor_gate && p.label_actor[a] != p.label_actor[b]) e += inst.params.theta_t;
                if (action_gate && p.label_action[a] != p.label_action[b]) e += inst.params.theta_t;
                table(a, b) = e;
            }
        const auto& members = members_of(inst.tree, t);
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                const auto key = std::minmax(members[a], members[b]);
                auto [it, fresh] = merged.try_emplace({key.first, key.second}, table);
                if (!fresh) it->second += table;
            }
    }
    for (auto& [key, table] : merged)
        p.group_edges.push_back({key.first, key.second, std::move(table)});

    p.actor_cost.resize(ls.n_actors());
    for (Index x = 0; x < ls.n_actors(); ++x)
        p.actor_cost(x) = actor_supported(inst, v, x) ? 0.0 : inst.params.theta_V;
    p.action_cost.resize(ls.n_actions());
    for (Index y = 0; y < ls.n_actions(); ++y)
        p.action_cost(y) = action_supported(inst, v, y) ? 0.0 : inst.params.theta_V;
    return p;
}

namespace {

// One alpha-expansion move solved exactly by min-cut. Binary choice per node:
// keep the current label (source side) or switch to alpha (sink side). Label
// costs get one auxiliary node per class that could appear or disappear.
// Returns the candidate labeling and the predicted objective (cut + constant).
struct MoveResult {
    Labeling labeling;
    double predicted = 0.0;
};

MoveResult expansion_move(const ExpansionProblem& p,
                          const std::vector<const PairwiseTerm*>& terms, const Labeling& cur,
                          Index alpha) {
    std::vector<Index> node_of(p.n_nodes, -1); // graph id of each participant
    std::vector<Index> participants;
    for (Index i = 0; i < p.n_nodes; ++i)
        if (cur.joint[i] != alpha) {
            node_of[i] = static_cast<Index>(participants.size());
            participants.push_back(i);
        }
    const Index n_fixed = p.n_nodes - static_cast<Index>(participants.size());

    double constant = 0.0;
    std::vector<double> e_keep(participants.size(), 0.0); // paid when b=0
    std::vector<double> e_take(participants.size(), 0.0); // paid when b=1
    struct NLink {
        Index from, to;
        double cap;
    };
    std::vector<NLink> links;

    for (std::size_t k = 0; k < participants.size(); ++k) {
        const Index i = participants[k];
        e_keep[k] += p.unary(i, cur.joint[i]);
        e_take[k] += p.unary(i, alpha);
    }
    for (Index i = 0; i < p.n_nodes; ++i)
        if (node_of[i] < 0) constant += p.unary(i, alpha);

    for (const PairwiseTerm* term : terms) {
        const Index i = term->i, j = term->j;
        const Index ki = node_of[i], kj = node_of[j];
        const double d = term->table(alpha, alpha); // 0 for well-formed tables
        if (ki < 0 && kj < 0) {
            constant += d;
            continue;
        }
        if (ki < 0) {
            e_keep[kj] += term->table(alpha, cur.joint[j]);
            e_take[kj] += d;
            continue;
        }
        if (kj < 0) {
            e_keep[ki] += term->table(cur.joint[i], alpha);
            e_take[ki] += d;
            continue;
        }
        const double a = term->table(cur.joint[i], cur.joint[j]); // E(0,0)
        const double b = term->table(cur.joint[i], alpha);        // E(0,1)
        const double c = term->table(alpha, cur.joint[j]);        // E(1,0)
        double lambda = b + c - a - d;
        if (lambda < 0) {
            if (lambda < -1e-9 * (1.0 + std::abs(a)))
                throw NonMetricError("expansion move is not submodular for this table");
            lambda = 0;
        }
        // E = a + (c-a) b_i + (d-c) b_j + lambda [b_i=0, b_j=1]
        constant += a;
        e_take[ki] += c - a;
        e_take[kj] += d - c;
        if (lambda > 0) links.push_back({ki, kj, lambda});
    }

    // Label-cost bookkeeping: which classes hold which participants.
    struct Gadget {
        double cost;
        std::vector<Index> holders; // empty: appear-gadget over all participants
    };
    std::vector<Gadget> gadgets;
    auto handle_class = [&](bool is_actor, Index c, double cost) {
        if (cost <= 0 || c < 0) return;
        std::vector<Index> holders;
        for (std::size_t k = 0; k < participants.size(); ++k) {
            const Index l = cur.joint[participants[k]];
            if ((is_actor ? p.label_actor[l] : p.label_action[l]) == c)
                holders.push_back(static_cast<Index>(k));
        }
        const Index alpha_class = is_actor ? p.label_actor[alpha] : p.label_action[alpha];
        if (c == alpha_class) {
            // Switching to alpha keeps the class alive, so it can only appear.
            if (n_fixed > 0 || !holders.empty()) constant += cost;
            else if (!participants.empty()) gadgets.push_back({cost, {}});
        } else if (!holders.empty()) {
            gadgets.push_back({cost, std::move(holders)}); // may disappear
        }
    };
    for (Index x = 0; x < p.actor_cost.size(); ++x) handle_class(true, x, p.actor_cost(x));
    for (Index y = 0; y < p.action_cost.size(); ++y) handle_class(false, y, p.action_cost(y));

    MaxFlow flow(static_cast<int>(participants.size() + gadgets.size()));
    for (std::size_t k = 0; k < participants.size(); ++k) {
        // Shift the smaller side into the constant so capacities stay >= 0.
        const double base = std::min(e_keep[k], e_take[k]);
        constant += base;
        if (e_keep[k] - base > 0) flow.add_sink_edge(static_cast<int>(k), e_keep[k] - base);
        if (e_take[k] - base > 0) flow.add_source_edge(static_cast<int>(k), e_take[k] - base);
    }
    for (const NLink& l : links) flow.add_edge(l.from, l.to, l.cap);
    for (std::size_t g = 0; g < gadgets.size(); ++g) {
        const int aux = static_cast<int>(participants.size() + g);
        if (gadgets[g].holders.empty()) {
            // Appears when any participant switches: pay cost when aux lands
            // on the sink side, force aux there whenever some b_i = 1.
            flow.add_source_edge(aux, gadgets[g].cost);
            for (std::size_t k = 0; k < participants.size(); ++k)
                flow.add_edge(aux, static_cast<int>(k), kInf);
        } else {
            // Disappears only when all holders switch: pay cost while aux is
            // on the source side, allow the sink side only then.
            flow.add_sink_edge(aux, gadgets[g].cost);
            for (Index k : gadgets[g].holders) flow.add_edge(k, aux, kInf);
        }
    }

    MoveResult result;
    result.predicted = constant + flow.solve();
    result.labeling = cur;
    for (std::size_t k = 0; k < participants.size(); ++k)
        if (!flow.source_side(static_cast<int>(k))) result.labeling.joint[participants[k]] = alpha;
    return result;
}

std::vector<const PairwiseTerm*> all_terms(const ExpansionProblem& p) {
    std::vector<const PairwiseTerm*> terms;
    terms.reserve(p.crf_edges.size() + p.group_edges.size());
    for (const auto& t : p.crf_edges) terms.push_back(&t);
    for (const auto& t : p.group_edges) terms.push_back(&t);
    return terms;
}

bool table_is_metric(const Eigen::MatrixXd& table) {
    const Index n = static_cast<Index>(table.rows());
    const double tol = 1e-9 * (1.0 + table.cwiseAbs().maxCoeff());
    for (Index a = 0; a < n; ++a)
        if (std::abs(table(a, a)) > tol) return false;
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
            for (Index c = 0; c < n; ++c)
                if (table(a, b) > table(a, c) + table(c, b) + tol) return false;
    return true;
}

} // namespace

bool check_submodular(const ExpansionProblem& p) {
    // Tables repeat heavily (one per contrast value, a handful of gate
    // combinations), so bucket identical ones before the cubic check.
    std::map<std::vector<double>, bool> cache;
    auto check = [&](const Eigen::MatrixXd& table) {
        std::vector<double> key(table.data(), table.data() + table.size());
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(std::move(key), table_is_metric(table)).first;
        return it->second;
    };
    for (const auto& t : p.crf_edges)
        if (!check(t.table)) return false;
    for (const auto& t : p.group_edges)
        if (!check(t.table)) return false;
    return true;
}

Labeling alpha_expansion(const ExpansionProblem& p, Labeling init,
                         std::optional<std::uint64_t> shuffle_seed) {
    if (init.size() != p.n_nodes)
        throw std::invalid_argument("alpha_expansion: init labeling length mismatch");
    if (!check_submodular(p))
        throw NonMetricError("alpha_expansion: pairwise tables are not metric");

    std::vector<Index> order(p.n_labels);
    std::iota(order.begin(), order.end(), 0);
    if (shuffle_seed) {
        std::mt19937_64 rng(*shuffle_seed);
        std::shuffle(order.begin(), order.end(), rng);
    }

    const auto terms = all_terms(p);
    Labeling current = std::move(init);
    double current_energy = p.energy(current);
    bool improved = true;
    while (improved) {
        improved = false;
        for (Index alpha : order) {
            MoveResult move = expansion_move(p, terms, current, alpha);
            const double candidate_energy = p.energy(move.labeling);
            // The cut value must account for the move energy exactly.
            if (std::abs(candidate_energy - move.predicted) >
                1e-6 * (1.0 + std::abs(candidate_energy)))
                throw std::logic_error("alpha_expansion: cut value disagrees with the energy");
            if (candidate_energy > current_energy + 1e-9 * (1.0 + std::abs(current_energy)))
                throw std::logic_error("alpha_expansion: move increased the objective");
            if (candidate_energy < current_energy - 1e-9 * (1.0 + std::abs(current_energy))) {
                current = std::move(move.labeling);
                current_energy = candidate_energy;
                improved = true;
            }
        }
    }
    return current;
}

Labeling icm(const ExpansionProblem& p, Labeling init) {
    if (init.size() != p.n_nodes) throw std::invalid_argument("icm: init labeling length mismatch");
    struct Incident {
        const Eigen::MatrixXd* table;
        Index other;
        bool transposed;
    };
    std::vector<std::vector<Incident>> incident(p.n_nodes);
    for (const PairwiseTerm* term : all_terms(p)) {
        incident[term->i].push_back({&term->table, term->j, false});
        incident[term->j].push_back({&term->table, term->i, true});
    }

    std::vector<int> actor_count(p.actor_cost.size(), 0), action_count(p.action_cost.size(), 0);
    for (Index i = 0; i < p.n_nodes; ++i) {
        if (p.label_actor[init.joint[i]] >= 0) ++actor_count[p.label_actor[init.joint[i]]];
        if (p.label_action[init.joint[i]] >= 0) ++action_count[p.label_action[init.joint[i]]];
    }
    auto local = [&](Index i, Index l) {
        double e = p.unary(i, l);
        for (const Incident& inc : incident[i])
            e += inc.transposed ? (*inc.table)(init.joint[inc.other], l)
                                : (*inc.table)(l, init.joint[inc.other]);
        return e;
    };
    auto cost_delta = [&](Index from, Index to) {
        double delta = 0.0;
        const Index fa = p.label_actor[from], ta = p.label_actor[to];
        const Index fb = p.label_action[from], tb = p.label_action[to];
        if (fa != ta) {
            if (fa >= 0 && actor_count[fa] == 1) delta -= p.actor_cost(fa);
            if (ta >= 0 && actor_count[ta] == 0) delta += p.actor_cost(ta);
        }
        if (fb != tb) {
            if (fb >= 0 && action_count[fb] == 1) delta -= p.action_cost(fb);
            if (tb >= 0 && action_count[tb] == 0) delta += p.action_cost(tb);
        }
        return delta;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (Index i = 0; i < p.n_nodes; ++i) {
            const Index old = init.joint[i];
            const double base = local(i, old);
            Index best = old;
            double best_delta = 0.0;
            for (Index l = 0; l < p.n_labels; ++l) {
                if (l == old) continue;
                const double delta = local(i, l) - base + cost_delta(old, l);
                if (delta < best_delta - 1e-12) {
                    best = l;
                    best_delta = delta;
                }
            }
            if (best != old) {
                if (p.label_actor[old] >= 0) --actor_count[p.label_actor[old]];
                if (p.label_action[old] >= 0) --action_count[p.label_action[old]];
                if (p.label_actor[best] >= 0) ++actor_count[p.label_actor[best]];
                if (p.label_action[best] >= 0) ++action_count[p.label_action[best]];
                init.joint[i] = best;
                changed = true;
            }
        }
    }
    return init;
}

Labeling brute_force_labeling(const ExpansionProblem& p) {
    double combos = 1.0;
    for (Index i = 0; i < p.n_nodes; ++i) {
        combos *= p.n_labels;
        if (combos > 2e6)
            throw std::invalid_argument("brute_force_labeling: instance too large (max 2e6 assignments)");
    }

    Labeling assignment;
    assignment.joint.assign(p.n_nodes, 0);
    Labeling best = assignment;
    double best_energy = p.energy(best);
    // Lexicographic odometer, last coordinate fastest; strict improvement
    // keeps the lexicographically smallest optimum.
    while (true) {
        Index pos = p.n_nodes - 1;
        while (pos >= 0 && assignment.joint[pos] == p.n_labels - 1) {
            assignment.joint[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++assignment.joint[pos];
        const double e = p.energy(assignment);
        if (e < best_energy) {
            best_energy = e;
            best = assignment;
        }
    }
    return best;
}

} // namespace gpm

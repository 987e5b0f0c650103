#include "gpm/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace gpm {

MaxFlow::MaxFlow(int n_nodes) : arcs_(n_nodes + 2), source_(n_nodes), sink_(n_nodes + 1) {}

void MaxFlow::add_edge(int u, int v, double cap, double rev_cap) {
    if (cap < 0 || rev_cap < 0) throw std::invalid_argument("max-flow capacities must be >= 0");
    arcs_[u].push_back({v, cap, arcs_[v].size()});
    arcs_[v].push_back({u, rev_cap, arcs_[u].size() - 1});
}

void MaxFlow::add_source_edge(int v, double cap) { add_edge(source_, v, cap); }

void MaxFlow::add_sink_edge(int v, double cap) { add_edge(v, sink_, cap); }

bool MaxFlow::bfs_levels() {
    level_.assign(arcs_.size(), -1);
    std::queue<int> queue;
    level_[source_] = 0;
    queue.push(source_);
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop();
        for (const Arc& a : arcs_[v]) {
            if (a.cap > 0 && level_[a.to] < 0) {
                level_[a.to] = level_[v] + 1;
                queue.push(a.to);
            }
        }
    }
    return level_[sink_] >= 0;
}

double MaxFlow::dfs_push(int v, double limit) {
    if (v == sink_) return limit;
    for (std::size_t& idx = iter_[v]; idx < arcs_[v].size(); ++idx) {
        Arc& a = arcs_[v][idx];
        if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
        const double pushed = dfs_push(a.to, std::min(limit, a.cap));
        if (pushed > 0) {
            a.cap -= pushed;
            arcs_[a.to][a.rev].cap += pushed;
            return pushed;
        }
    }
    return 0.0;
}

double MaxFlow::solve() {
    double flow = 0.0;
    while (bfs_levels()) {
        iter_.assign(arcs_.size(), 0);
        while (true) {
            const double pushed = dfs_push(source_, std::numeric_limits<double>::infinity());
            if (pushed <= 0) break;
            flow += pushed;
        }
    }
    return flow;
}

bool MaxFlow::source_side(int v) const { return level_[v] >= 0; }

} // namespace gpm

#pragma once

#include <cstdint>
#include <vector>

namespace gpm {

/// Dinic max-flow / min-cut on a directed graph with non-negative real
/// capacities and two implicit terminals. After solve(), source_side(v) tells
/// which side of the minimum cut node v landed on.
class MaxFlow {
public:
    /// n_nodes covers every non-terminal node, auxiliaries included.
    explicit MaxFlow(int n_nodes);

    /// Directed edge u -> v with capacity cap and reverse capacity rev_cap.
    void add_edge(int u, int v, double cap, double rev_cap = 0.0);
    void add_source_edge(int v, double cap);
    void add_sink_edge(int v, double cap);

    /// Max-flow value == min-cut value.
    double solve();

    /// Valid after solve(): true when v is reachable from the source in the
    /// residual graph.
    bool source_side(int v) const;

private:
    struct Arc {
        int to;
        double cap;
        std::size_t rev;
    };

    bool bfs_levels();
    double dfs_push(int v, double limit);

    std::vector<std::vector<Arc>> arcs_;
    std::vector<int> level_;
    std::vector<std::size_t> iter_;
    int source_, sink_;
};

} // namespace gpm

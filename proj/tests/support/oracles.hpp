#pragma once

// Naive reference implementations kept independent of the library's
// estimation/enumeration code paths. Tests compare library output against
// these on small inputs.

#include <algorithm>
#include <vector>

#include "graphhypo/graph.hpp"
#include "graphhypo/hypothesis.hpp"

namespace oracles {

using namespace graphhypo;

using Instance = std::pair<std::vector<NodeId>, std::vector<EdgeId>>;

// Plain recursive enumeration of ordered simple path instances by scanning
// the raw edge list at every step (no adjacency, no pruning, no shared code
// with enumerate_paths beyond clause matching semantics).
inline void naive_extend(const AttributedGraph& g, const GraphView& view,
                         const PathPattern& p, Instance& cur,
                         std::vector<Instance>& out) {
    std::size_t depth = cur.second.size();
    if (depth == p.length()) {
        out.push_back(cur);
        return;
    }
    const EdgeClause& link = p.links[depth];
    NodeId from = cur.first.back();
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!view.has_edge(e)) continue;
        if (g.edge_type(e) != TypeId(link.type_id)) continue;
        NodeId next;
        if (link.forward) {
            if (g.edge_src(e) != from) continue;
            next = g.edge_dst(e);
        } else {
            if (g.edge_dst(e) != from) continue;
            next = g.edge_src(e);
        }
        if (!view.has_node(next)) continue;
        if (std::find(cur.first.begin(), cur.first.end(), next) != cur.first.end()) continue;
        if (!node_matches(g, next, p.steps[depth + 1])) continue;
        cur.first.push_back(next);
        cur.second.push_back(e);
        naive_extend(g, view, p, cur, out);
        cur.first.pop_back();
        cur.second.pop_back();
    }
}

inline std::vector<Instance> naive_paths(const AttributedGraph& g, const GraphView& view,
                                         const PathPattern& p) {
    std::vector<Instance> out;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!view.has_node(v) || !node_matches(g, v, p.steps[0])) continue;
        Instance cur{{v}, {}};
        naive_extend(g, view, p, cur, out);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Instance> naive_paths(const AttributedGraph& g, const PathPattern& p) {
    return naive_paths(g, GraphView(g), p);
}

}  // namespace oracles

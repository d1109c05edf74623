#pragma once

#include <string>
#include <vector>

#include "graphhypo/graph.hpp"
#include "graphhypo/hypothesis_parse.hpp"

namespace fixtures {

using namespace graphhypo;

using Attrs = std::vector<std::pair<std::string, AttrValue>>;

// Single node type "node" (numeric attr x), single edge type "link".
inline GraphSchema plain_schema() {
    GraphSchema s;
    s.node_types.push_back({"node", {{"x", AttrKind::Number}, {"tag", AttrKind::Category}}});
    s.edge_types.push_back({"link", 0, 0, {{"w", AttrKind::Number}}});
    return s;
}

inline AttributedGraph from_edges(std::size_t n,
                                  const std::vector<std::pair<NodeId, NodeId>>& edges,
                                  const std::vector<double>& node_x = {},
                                  const std::vector<double>& edge_w = {}) {
    GraphBuilder b(plain_schema());
    for (std::size_t i = 0; i < n; ++i) {
        Attrs a{{"x", node_x.empty() ? double(i) : node_x[i]}};
        b.add_node("n" + std::to_string(i), 0, a);
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        Attrs a{{"w", edge_w.empty() ? 1.0 : edge_w[i]}};
        b.add_edge(edges[i].first, edges[i].second, 0, a);
    }
    return b.build();
}

inline AttributedGraph path_graph(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(NodeId(i), NodeId(i + 1));
    return from_edges(n, e);
}

// Node 0 is the hub.
inline AttributedGraph star_graph(std::size_t leaves) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, NodeId(i));
    return from_edges(leaves + 1, e);
}

inline AttributedGraph cycle_graph(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (std::size_t i = 0; i < n; ++i) e.emplace_back(NodeId(i), NodeId((i + 1) % n));
    return from_edges(n, e);
}

// Full binary tree with `levels` levels (root = 0); 2^levels - 1 nodes.
inline AttributedGraph binary_tree(std::size_t levels) {
    std::size_t n = (std::size_t(1) << levels) - 1;
    std::vector<std::pair<NodeId, NodeId>> e;
    for (std::size_t i = 1; i < n; ++i) e.emplace_back(NodeId((i - 1) / 2), NodeId(i));
    return from_edges(n, e);
}

inline AttributedGraph triangle_graph() {
    return from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
}

// user/movie bipartite fixture with attributes, for DSL and estimator tests.
//   users: u0(age 30, F), u1(age 40, M), u2(age 25, F)
//   movies: m0(year 1999), m1(year 2005)
//   Rates: u0->m0 (4), u1->m0 (3), u1->m1 (5), u2->m1 (2)
inline AttributedGraph user_movie() {
    GraphSchema s;
    s.node_types.push_back(
        {"user", {{"age", AttrKind::Number}, {"gender", AttrKind::Category}}});
    s.node_types.push_back({"movie", {{"year", AttrKind::Number}}});
    s.edge_types.push_back({"Rates", 0, 1, {{"rating", AttrKind::Number}}});
    GraphBuilder b(s);
    auto user = [&](const char* k, double age, const char* gender) {
        Attrs a{{"age", age}, {"gender", std::string(gender)}};
        return b.add_node(k, 0, a);
    };
    auto movie = [&](const char* k, double year) {
        Attrs a{{"year", year}};
        return b.add_node(k, 1, a);
    };
    NodeId u0 = user("u0", 30, "F"), u1 = user("u1", 40, "M"), u2 = user("u2", 25, "F");
    NodeId m0 = movie("m0", 1999), m1 = movie("m1", 2005);
    auto rate = [&](NodeId u, NodeId m, double r) {
        Attrs a{{"rating", r}};
        b.add_edge(u, m, 0, a);
    };
    rate(u0, m0, 4);
    rate(u1, m0, 3);
    rate(u1, m1, 5);
    rate(u2, m1, 2);
    return b.build();
}

// author/paper fixture: a0 and a1 both authored p0 (citation 120).
inline AttributedGraph author_paper() {
    GraphSchema s;
    s.node_types.push_back({"author", {{"org", AttrKind::Category}}});
    s.node_types.push_back({"paper", {{"citation", AttrKind::Number}}});
    s.edge_types.push_back({"Authorship", 1, 0, {}});  // paper -> author
    GraphBuilder b(s);
    Attrs msr{{"org", std::string("MSR")}};
    NodeId a0 = b.add_node("a0", 0, msr);
    NodeId a1 = b.add_node("a1", 0, msr);
    Attrs cit{{"citation", 120.0}};
    NodeId p0 = b.add_node("p0", 1, cit);
    b.add_edge(p0, a0, 0, {});
    b.add_edge(p0, a1, 0, {});
    return b.build();
}

inline Hypothesis hyp(const AttributedGraph& g, const std::string& text) {
    return parse_hypothesis(text, g.schema(), &g);
}

}  // namespace fixtures

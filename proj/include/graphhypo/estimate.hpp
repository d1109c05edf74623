#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphhypo/graph.hpp"
#include "graphhypo/hypothesis.hpp"
#include "graphhypo/sample.hpp"

namespace graphhypo {

// ---------------------------------------------------------------------------
// Relevant elements
// ---------------------------------------------------------------------------

struct RelevantSets {
    std::vector<NodeId> nodes;       // l = 0
    std::vector<EdgeId> edges;       // l = 1
    std::uint64_t path_count = 0;    // l >= 1, filled by count_paths
    bool truncated = false;
};

inline std::vector<NodeId> relevant_nodes(const GraphView& view, const NodeClause& clause) {
    std::vector<NodeId> out;
    const AttributedGraph& g = view.graph();
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (view.has_node(v) && node_matches(g, v, clause)) out.push_back(v);
    return out;
}

// Edges realizing a single-link pattern, honoring the link direction.
inline std::vector<EdgeId> relevant_edges(const GraphView& view, const PathPattern& p) {
    std::vector<EdgeId> out;
    const AttributedGraph& g = view.graph();
    const EdgeClause& link = p.links.at(0);
    const NodeClause& from = p.steps[0];
    const NodeClause& to = p.steps[1];
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!view.has_edge(e)) continue;
        if (g.edge_type(e) != TypeId(link.type_id)) continue;
        NodeId src = g.edge_src(e), dst = g.edge_dst(e);
        const NodeClause& src_clause = link.forward ? from : to;
        const NodeClause& dst_clause = link.forward ? to : from;
        if (!view.has_node(src) || !view.has_node(dst)) continue;
        if (node_matches(g, src, src_clause) && node_matches(g, dst, dst_clause))
            out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Path enumeration
// ---------------------------------------------------------------------------

struct EnumStatus {
    std::uint64_t count = 0;
    bool truncated = false;
};

// Streams every ordered simple path instance matching the pattern, in
// lexicographic id order (start nodes ascending, then adjacency order, which
// is sorted by neighbor then edge id). Nodes on one instance are pairwise
// distinct. Stops after `limit` instances and reports truncation.
template <typename Fn>
EnumStatus enumerate_paths(const GraphView& view, const PathPattern& pattern,
                           std::uint64_t limit, Fn&& fn) {
    const AttributedGraph& g = view.graph();
    const std::size_t l = pattern.length();
    EnumStatus status;
    if (l == 0) throw InputError("enumerate_paths requires a pattern of length >= 1");

    std::vector<NodeId> nodes(l + 1);
    std::vector<EdgeId> edges(l);
    std::vector<std::uint8_t> on_path(g.node_count(), 0);

    // Cheap pre-check: a clause with zero candidates anywhere makes the
    // enumeration empty.
    for (const NodeClause& c : pattern.steps) {
        bool any = false;
        for (NodeId v = 0; v < g.node_count() && !any; ++v)
            any = view.has_node(v) && node_matches(g, v, c);
        if (!any) return status;
    }

    auto extend = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == l) {
            ++status.count;
            fn(PathInstance{nodes, edges});
            if (status.count >= limit) {
                status.truncated = true;
                return false;
            }
            return true;
        }
        const EdgeClause& link = pattern.links[depth];
        const NodeClause& next_clause = pattern.steps[depth + 1];
        for (const AdjEntry& a : g.neighbors(nodes[depth])) {
            if (a.forward != link.forward) continue;
            if (g.edge_type(a.edge) != TypeId(link.type_id)) continue;
            if (!view.has_edge(a.edge)) continue;
            NodeId u = a.neighbor;
            if (on_path[u] || !view.has_node(u)) continue;
            if (!node_matches(g, u, next_clause)) continue;
            nodes[depth + 1] = u;
            edges[depth] = a.edge;
            on_path[u] = 1;
            bool keep_going = self(self, depth + 1);
            on_path[u] = 0;
            if (!keep_going) return false;
        }
        return true;
    };

    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!view.has_node(v) || !node_matches(g, v, pattern.steps[0])) continue;
        nodes[0] = v;
        on_path[v] = 1;
        bool keep_going = extend(extend, 0);
        on_path[v] = 0;
        if (!keep_going) break;
    }
    return status;
}

inline RelevantSets relevant_sets(const GraphView& view, const Hypothesis& h,
                                  std::uint64_t path_limit = 100000000ULL) {
    RelevantSets out;
    if (h.length() == 0) {
        out.nodes = relevant_nodes(view, h.pattern.steps[0]);
    } else {
        if (h.length() == 1) out.edges = relevant_edges(view, h.pattern);
        EnumStatus st = enumerate_paths(view, h.pattern, path_limit,
                                        [](const PathInstance&) {});
        out.path_count = st.count;
        out.truncated = st.truncated;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Estimates
// ---------------------------------------------------------------------------

struct EstimateOptions {
    bool literal_eq2 = false;           // diagnostic variant of the Eq. 2 denominator
    std::uint64_t path_limit = 100000000ULL;
    bool collect_contributions = false;
};

struct Contribution {
    std::string element;
    double value = 0.0;
    double weight = 1.0;
};

struct Estimate {
    std::optional<double> value;
    std::uint64_t n_relevant = 0;
    double n_eff = 0.0;       // effective sample size (= n_relevant when unweighted)
    double variance = 0.0;    // corrected sample variance of the relevant values
    bool inconclusive = true;
    bool truncated = false;
    Agg agg = Agg::Avg;
    std::vector<Contribution> contributions;
};

namespace detail {

// Weighted streaming mean/variance (West 1979) plus extrema, so one pass
// serves avg, min, and max aggregates.
class Accumulator {
public:
    explicit Accumulator(Agg agg) : agg_(agg) {}

    void add(double x, double w) {
        ++n_;
        sum_w_ += w;
        sum_w2_ += w * w;
        double delta = x - mean_;
        mean_ += (w / sum_w_) * delta;
        m2_ += w * delta * (x - mean_);
        lo_ = std::min(lo_, x);
        hi_ = std::max(hi_, x);
    }

    std::uint64_t count() const { return n_; }

    double n_eff() const { return sum_w_ > 0.0 ? sum_w_ * sum_w_ / sum_w2_ : 0.0; }

    void finish(Estimate& est) const {
        est.agg = agg_;
        est.n_relevant = n_;
        est.n_eff = n_eff();
        if (n_ == 0) {
            est.inconclusive = true;
            return;
        }
        est.inconclusive = false;
        switch (agg_) {
            case Agg::Avg: est.value = mean_; break;
            case Agg::Min: est.value = lo_; break;
            case Agg::Max: est.value = hi_; break;
        }
        double ne = n_eff();
        if (agg_ == Agg::Avg && ne > 1.0) {
            double biased = m2_ / sum_w_;
            est.variance = biased * ne / (ne - 1.0);
        }
    }

private:
    Agg agg_;
    std::uint64_t n_ = 0;
    double sum_w_ = 0.0, sum_w2_ = 0.0;
    double mean_ = 0.0, m2_ = 0.0;
    double lo_ = std::numeric_limits<double>::infinity();
    double hi_ = -std::numeric_limits<double>::infinity();
};

inline NodeId arrival_node(const AttributedGraph& g, const TraversalStep& step) {
    return step.forward ? g.edge_dst(step.edge) : g.edge_src(step.edge);
}

}  // namespace detail

// Eq. 2 over a traversal sequence: self-normalized with per-entry weight
// 1/deg(v_i). The literal-denominator variant divides by the raw count of
// relevant entries instead (it converges to sum(attr)/sum(deg) over V*, kept
// for comparison only).
inline Estimate estimate_node_from_sequence(const AttributedGraph& g,
                                            const std::vector<TraversalStep>& sequence,
                                            const Hypothesis& h,
                                            const EstimateOptions& opts = {}) {
    const NodeClause& clause = h.pattern.steps[0];
    Estimate est;
    if (opts.literal_eq2) {
        double num = 0.0;
        std::uint64_t n = 0;
        for (const TraversalStep& s : sequence) {
            NodeId v = detail::arrival_node(g, s);
            if (!node_matches(g, v, clause)) continue;
            NodeId inst[1] = {v};
            double x = eval_target(g, h, PathInstance{inst, {}});
            num += x / double(g.degree(v));
            ++n;
        }
        est.agg = h.agg;
        est.n_relevant = n;
        est.n_eff = double(n);
        est.inconclusive = n == 0;
        if (n > 0) est.value = num / double(n);
        return est;
    }
    detail::Accumulator acc(h.agg);
    for (const TraversalStep& s : sequence) {
        NodeId v = detail::arrival_node(g, s);
        if (!node_matches(g, v, clause)) continue;
        NodeId inst[1] = {v};
        double x = eval_target(g, h, PathInstance{inst, {}});
        double w = 1.0 / double(g.degree(v));
        acc.add(x, w);
        if (opts.collect_contributions)
            est.contributions.push_back({g.node_key(v), x, w});
    }
    acc.finish(est);
    return est;
}

// Plain mean over relevant nodes in a node set (node samplers, and any sample
// that covers the whole graph, where the subgraph aggregate is exact).
inline Estimate estimate_node_from_set(const AttributedGraph& g,
                                       const std::vector<NodeId>& nodes,
                                       const Hypothesis& h,
                                       const EstimateOptions& opts = {}) {
    const NodeClause& clause = h.pattern.steps[0];
    Estimate est;
    detail::Accumulator acc(h.agg);
    for (NodeId v : nodes) {
        if (!node_matches(g, v, clause)) continue;
        NodeId inst[1] = {v};
        double x = eval_target(g, h, PathInstance{inst, {}});
        acc.add(x, 1.0);
        if (opts.collect_contributions) est.contributions.push_back({g.node_key(v), x, 1.0});
    }
    acc.finish(est);
    return est;
}

inline Estimate estimate_node(const AttributedGraph& g, const SampledSubgraph& s,
                              const Hypothesis& h, const EstimateOptions& opts = {}) {
    if (h.length() != 0) throw InputError("estimate_node requires a node hypothesis (l=0)");
    bool full_coverage = s.nodes.size() == g.node_count();
    if (s.meta.family == SamplerFamily::NodeSet || full_coverage)
        return estimate_node_from_set(g, s.nodes, h, opts);
    return estimate_node_from_sequence(g, s.sequence, h, opts);
}

// Eq. 5 as a mean over the relevant distinct edges of E_S (definitionally
// equal to the l=1 path estimate on the sampled subgraph).
inline Estimate estimate_edge(const AttributedGraph& g, const SampledSubgraph& s,
                              const Hypothesis& h, const EstimateOptions& opts = {}) {
    if (h.length() != 1) throw InputError("estimate_edge requires an edge hypothesis (l=1)");
    const EdgeClause& link = h.pattern.links[0];
    Estimate est;
    detail::Accumulator acc(h.agg);
    for (EdgeId e : s.edges) {
        if (g.edge_type(e) != TypeId(link.type_id)) continue;
        NodeId src = g.edge_src(e), dst = g.edge_dst(e);
        NodeId first = link.forward ? src : dst;
        NodeId second = link.forward ? dst : src;
        if (!node_matches(g, first, h.pattern.steps[0])) continue;
        if (!node_matches(g, second, h.pattern.steps[1])) continue;
        NodeId inst_nodes[2] = {first, second};
        EdgeId inst_edges[1] = {e};
        double x = eval_target(g, h, PathInstance{inst_nodes, inst_edges});
        acc.add(x, 1.0);
        if (opts.collect_contributions)
            est.contributions.push_back(
                {g.node_key(first) + "->" + g.node_key(second), x, 1.0});
    }
    acc.finish(est);
    return est;
}

// Eq. 8: streaming aggregate over path instances inside the sampled subgraph.
inline Estimate estimate_path(const AttributedGraph& g, const SampledSubgraph& s,
                              const Hypothesis& h, const EstimateOptions& opts = {}) {
    if (h.length() < 1) throw InputError("estimate_path requires a pattern of length >= 1");
    GraphView view = GraphView::of_sample(g, s);
    Estimate est;
    detail::Accumulator acc(h.agg);
    EnumStatus st = enumerate_paths(view, h.pattern, opts.path_limit,
                                    [&](const PathInstance& inst) {
        double x = eval_target(g, h, inst);
        acc.add(x, 1.0);
        if (opts.collect_contributions) {
            std::string label = g.node_key(inst.nodes[0]);
            for (std::size_t i = 1; i < inst.nodes.size(); ++i)
                label += "|" + g.node_key(inst.nodes[i]);
            est.contributions.push_back({std::move(label), x, 1.0});
        }
    });
    acc.finish(est);
    est.truncated = st.truncated;
    return est;
}

// Hypothesis-type dispatch used by the CLI and the benchmark harness.
inline Estimate estimate(const AttributedGraph& g, const SampledSubgraph& s,
                         const Hypothesis& h, const EstimateOptions& opts = {}) {
    if (h.length() == 0) return estimate_node(g, s, h, opts);
    if (h.length() == 1) return estimate_edge(g, s, h, opts);
    return estimate_path(g, s, h, opts);
}

}  // namespace graphhypo

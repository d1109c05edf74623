#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "graphhypo/graph.hpp"
#include "graphhypo/rng.hpp"
#include "graphhypo/sample.hpp"

namespace graphhypo {

struct SamplerSpec {
    SamplerKind kind = SamplerKind::SRW;
    std::uint64_t budget = 0;
    std::map<std::string, double> params;

    double param(const std::string& name, double fallback) const {
        auto it = params.find(name);
        return it == params.end() ? fallback : it->second;
    }
    bool has_param(const std::string& name) const { return params.count(name) != 0; }
};

namespace detail {

// Node-visit accounting shared by the walk and expansion samplers: one charge
// per newly visited node; a walk that goes too long without charging anything
// is considered stuck and teleports.
class VisitLedger {
public:
    VisitLedger(const AttributedGraph& g, std::uint64_t budget)
        : g_(&g),
          budget_(budget),
          visited_(g.node_count(), 0),
          stall_threshold_(20 * std::max<std::uint64_t>(g.node_count(), 50)) {}

    // Arrival at a node (new or revisited). Returns true when it charged.
    bool arrive(NodeId v) {
        if (visited_[v]) {
            ++steps_since_new_;
            return false;
        }
        visited_[v] = 1;
        order_.push_back(v);
        ++charged_;
        steps_since_new_ = 0;
        return true;
    }

    bool full() const { return charged_ >= budget_; }
    bool stalled() const { return steps_since_new_ > stall_threshold_; }
    bool seen(NodeId v) const { return visited_[v] != 0; }
    std::uint64_t charged() const { return charged_; }
    std::uint64_t budget_left() const { return budget_ - charged_; }
    const std::vector<NodeId>& order() const { return order_; }
    const std::vector<std::uint8_t>& mask() const { return visited_; }

    NodeId random_unvisited(Rng& rng) {
        for (int tries = 0; tries < 64; ++tries) {
            NodeId v = NodeId(rng.below(g_->node_count()));
            if (!visited_[v]) return v;
        }
        for (NodeId v = 0; v < g_->node_count(); ++v)
            if (!visited_[v]) return v;
        return NodeId(rng.below(g_->node_count()));
    }

    void note_teleport() {
        ++teleports_;
        steps_since_new_ = 0;
    }
    std::uint64_t teleports() const { return teleports_; }

private:
    const AttributedGraph* g_;
    std::uint64_t budget_;
    std::vector<std::uint8_t> visited_;
    std::vector<NodeId> order_;
    std::uint64_t charged_ = 0;
    std::uint64_t steps_since_new_ = 0;
    std::uint64_t stall_threshold_;
    std::uint64_t teleports_ = 0;
};

// First `take` elements of a Fisher-Yates partial shuffle over [0, n).
inline std::vector<std::uint32_t> sample_indices(std::uint64_t n, std::uint64_t take,
                                                 Rng& rng) {
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    take = std::min(take, n);
    for (std::uint64_t i = 0; i < take; ++i)
        std::swap(idx[i], idx[i + rng.below(n - i)]);
    idx.resize(take);
    return idx;
}

// Weighted sampling without replacement (exponential-key variant of
// Efraimidis-Spirakis): take the B smallest -log(u)/w keys.
inline std::vector<NodeId> weighted_without_replacement(std::span<const double> weights,
                                                        std::uint64_t take, Rng& rng) {
    std::vector<std::pair<double, NodeId>> keys;
    keys.reserve(weights.size());
    for (std::size_t v = 0; v < weights.size(); ++v) {
        double u;
        do {
            u = rng.unit();
        } while (u <= 0.0);
        double w = std::max(weights[v], 1e-300);
        keys.emplace_back(-std::log(u) / w, NodeId(v));
    }
    take = std::min<std::uint64_t>(take, keys.size());
    std::nth_element(keys.begin(), keys.begin() + std::ptrdiff_t(take - 1), keys.end());
    std::vector<NodeId> out;
    out.reserve(take);
    for (std::uint64_t i = 0; i < take; ++i) out.push_back(keys[i].second);
    std::sort(out.begin(), out.end());
    return out;
}

// Uniform adjacency entry of v.
inline const AdjEntry& random_step(const AttributedGraph& g, NodeId v, Rng& rng) {
    auto entries = g.neighbors(v);
    return entries[rng.below(entries.size())];
}

// Distinct neighbors of v in adjacency (hence id) order, each with one
// incident edge; among parallel edges one is drawn uniformly.
struct NeighborRef {
    NodeId node;
    EdgeId edge;
    bool forward;
};

inline void distinct_neighbors(const AttributedGraph& g, NodeId v, Rng& rng,
                               std::vector<NeighborRef>& out) {
    out.clear();
    auto entries = g.neighbors(v);
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i + 1;
        while (j < entries.size() && entries[j].neighbor == entries[i].neighbor) ++j;
        std::size_t pick = (j - i) > 1 ? i + rng.below(j - i) : i;
        out.push_back({entries[pick].neighbor, entries[pick].edge, entries[pick].forward});
        i = j;
    }
}

inline std::vector<double> pagerank(const AttributedGraph& g, double damping = 0.85,
                                    int iterations = 50) {
    std::size_t n = g.node_count();
    std::vector<double> pr(n, 1.0 / double(n)), next(n, 0.0);
    for (int it = 0; it < iterations; ++it) {
        std::fill(next.begin(), next.end(), (1.0 - damping) / double(n));
        for (NodeId v = 0; v < n; ++v) {
            double share = damping * pr[v] / double(g.degree(v));
            for (const AdjEntry& a : g.neighbors(v)) next[a.neighbor] += share;
        }
        pr.swap(next);
    }
    return pr;
}

inline SampledSubgraph finish_walk(const AttributedGraph& g, VisitLedger& ledger,
                                   std::vector<TraversalStep> sequence) {
    SampledSubgraph s = induced_subgraph(g, ledger.order());
    s.sequence = std::move(sequence);
    s.meta.charged = ledger.charged();
    s.meta.teleports = ledger.teleports();
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Node samplers: RNS, DBS, PRBS
// ---------------------------------------------------------------------------

inline SampledSubgraph sample_rns(const AttributedGraph& g, std::uint64_t budget, Rng& rng) {
    auto idx = detail::sample_indices(g.node_count(), budget, rng);
    std::vector<NodeId> nodes(idx.begin(), idx.end());
    SampledSubgraph s = induced_subgraph(g, nodes);
    s.meta.charged = s.nodes.size();
    return s;
}

inline SampledSubgraph sample_dbs(const AttributedGraph& g, std::uint64_t budget, Rng& rng) {
    std::vector<double> w(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) w[v] = double(g.degree(v));
    auto nodes = detail::weighted_without_replacement(w, budget, rng);
    SampledSubgraph s = induced_subgraph(g, nodes);
    s.meta.charged = s.nodes.size();
    return s;
}

inline SampledSubgraph sample_prbs(const AttributedGraph& g, std::uint64_t budget, Rng& rng) {
    auto pr = detail::pagerank(g);
    auto nodes = detail::weighted_without_replacement(pr, budget, rng);
    SampledSubgraph s = induced_subgraph(g, nodes);
    s.meta.charged = s.nodes.size();
    return s;
}

// ---------------------------------------------------------------------------
// Edge sampler: RES
// ---------------------------------------------------------------------------

// Uniform edges without replacement; each edge charges its not-yet-seen
// endpoints against the node-visit budget. Edges that no longer fit the
// remaining budget are discarded and another is drawn. The sequence records
// both orientations of every sampled edge.
inline SampledSubgraph sample_res(const AttributedGraph& g, std::uint64_t budget, Rng& rng) {
    SampledSubgraph s;
    std::vector<EdgeId> pool(g.edge_count());
    std::iota(pool.begin(), pool.end(), 0u);
    std::vector<std::uint8_t> seen(g.node_count(), 0);
    std::uint64_t budget_left = budget;
    std::uint64_t charged = 0;
    while (budget_left > 0 && !pool.empty()) {
        std::size_t i = std::size_t(rng.below(pool.size()));
        EdgeId e = pool[i];
        pool[i] = pool.back();
        pool.pop_back();
        NodeId a = g.edge_src(e), b = g.edge_dst(e);
        std::uint64_t cost = std::uint64_t(!seen[a]) + std::uint64_t(a != b && !seen[b]);
        if (cost > budget_left) continue;
        seen[a] = seen[b] = 1;
        budget_left -= cost;
        charged += cost;
        s.edges.push_back(e);
        s.sequence.push_back({e, true});
        s.sequence.push_back({e, false});
    }
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (seen[v]) s.nodes.push_back(v);
    std::sort(s.edges.begin(), s.edges.end());
    s.meta.charged = charged;
    return s;
}

// ---------------------------------------------------------------------------
// Walk samplers: SRW, NBRW, RWR, MHRW, CNARW, FrontierS
// ---------------------------------------------------------------------------

inline SampledSubgraph sample_srw(const AttributedGraph& g, std::uint64_t budget, Rng& rng) {
    detail::VisitLedger ledger(g, budget);
    std::vector<TraversalStep> seq;
    NodeId cur = NodeId(rng.below(g.node_count()));
    ledger.arrive(cur);
    while (!ledger.full()) {
        if (ledger.stalled()) {
            cur = ledger.random_unvisited(rng);
            ledger.note_teleport();
            ledger.arrive(cur);
            continue;
        }
        const AdjEntry& a = detail::random_step(g, cur, rng);
        seq.push_back({a.edge, a.forward});
        cur = a.neighbor;
        ledger.arrive(cur);
    }
    return detail::finish_walk(g, ledger, std::move(seq));
}

inline SampledSubgraph sample_nbrw(const AttributedGraph& g, std::uint64_t budget, Rng& rng) {
    detail::VisitLedger ledger(g, budget);
    std::vector<TraversalStep> seq;
    NodeId cur = NodeId(rng.below(g.node_count()));
    NodeId prev = kInvalidId;
    ledger.arrive(cur);
    std::vector<const AdjEntry*> valid;
    while (!ledger.full()) {
        if (ledger.stalled()) {
            cur = ledger.random_unvisited(rng);
            prev = kInvalidId;
            ledger.note_teleport();
            ledger.arrive(cur);
            continue;
        }
        valid.clear();
        for (const AdjEntry& a : g.neighbors(cur))
            if (a.neighbor != prev) valid.push_back(&a);
        if (valid.empty()) {
            // Dead end: the only way back would backtrack, so jump.
            cur = ledger.random_unvisited(rng);
            prev = kInvalidId;
            ledger.note_teleport();
            ledger.arrive(cur);
            continue;
        }
        const AdjEntry& a = *valid[rng.below(valid.size())];
        seq.push_back({a.edge, a.forward});
        prev = cur;
        cur = a.neighbor;
        ledger.arrive(cur);
    }
    return detail::finish_walk(g, ledger, std::move(seq));
}

inline SampledSubgraph sample_rwr(const AttributedGraph& g, std::uint64_t budget,
                                  double restart_prob, Rng& rng) {
    if (!(restart_prob > 0.0 && restart_prob < 1.0))
        throw InputError("rwr needs restart_prob in (0,1)");
    detail::VisitLedger ledger(g, budget);
    std::vector<TraversalStep> seq;
    NodeId start = NodeId(rng.below(g.node_count()));
    NodeId cur = start;
    ledger.arrive(cur);
    while (!ledger.full()) {
        if (ledger.stalled()) {
            start = cur = ledger.random_unvisited(rng);
            ledger.note_teleport();
            ledger.arrive(cur);
            continue;
        }
        if (rng.chance(restart_prob)) {
            cur = start;
            ledger.arrive(cur);
            continue;
        }
        const AdjEntry& a = detail::random_step(g, cur, rng);
        seq.push_back({a.edge, a.forward});
        cur = a.neighbor;
        ledger.arrive(cur);
    }
    return detail::finish_walk(g, ledger, std::move(seq));
}

// One Metropolis-Hastings step from cur: propose a uniform incident edge,
// accept with min(1, deg(cur)/deg(proposal)). Returns cur and no edge when
// the proposal is rejected.
struct MhStep {
    NodeId next;
    EdgeId edge;
    bool forward;
    bool moved;
};

inline MhStep mhrw_step(const AttributedGraph& g, NodeId cur, Rng& rng) {
    const AdjEntry& a = detail::random_step(g, cur, rng);
    double accept = double(g.degree(cur)) / double(g.degree(a.neighbor));
    if (rng.unit() < accept) return {a.neighbor, a.edge, a.forward, true};
    return {cur, 0, false, false};
}

inline SampledSubgraph sample_mhrw(const AttributedGraph& g, std::uint64_t budget, Rng& rng) {
    detail::VisitLedger ledger(g, budget);
    std::vector<TraversalStep> seq;
    NodeId cur = NodeId(rng.below(g.node_count()));
    ledger.arrive(cur);
    while (!ledger.full()) {
        if (ledger.stalled()) {
            cur = ledger.random_unvisited(rng);
            ledger.note_teleport();
            ledger.arrive(cur);
            continue;
        }
        MhStep step = mhrw_step(g, cur, rng);
        if (!step.moved) {
            ledger.arrive(cur);
            continue;
        }
        seq.push_back({step.edge, step.forward});
        cur = step.next;
        ledger.arrive(cur);
    }
    return detail::finish_walk(g, ledger, std::move(seq));
}

// Transition weight favors higher degree and fewer common neighbors with the
// current node: deg(u) * (1 - |N(v) ∩ N(u)| / min(deg v, deg u)).
inline SampledSubgraph sample_cnarw(const AttributedGraph& g, std::uint64_t budget, Rng& rng) {
    detail::VisitLedger ledger(g, budget);
    std::vector<TraversalStep> seq;
    NodeId cur = NodeId(rng.below(g.node_count()));
    ledger.arrive(cur);
    std::vector<detail::NeighborRef> cands;
    std::vector<double> weights;
    auto common_neighbors = [&](NodeId a, NodeId b) {
        auto ea = g.neighbors(a);
        auto eb = g.neighbors(b);
        std::size_t i = 0, j = 0, common = 0;
        NodeId last = kInvalidId;
        while (i < ea.size() && j < eb.size()) {
            NodeId x = ea[i].neighbor, y = eb[j].neighbor;
            if (x == y) {
                if (x != last) { ++common; last = x; }
                ++i;
                ++j;
            } else if (x < y) {
                ++i;
            } else {
                ++j;
            }
        }
        return common;
    };
    while (!ledger.full()) {
        if (ledger.stalled()) {
            cur = ledger.random_unvisited(rng);
            ledger.note_teleport();
            ledger.arrive(cur);
            continue;
        }
        detail::distinct_neighbors(g, cur, rng, cands);
        weights.clear();
        for (const auto& c : cands) {
            double sim = double(common_neighbors(cur, c.node)) /
                         double(std::min(g.degree(cur), g.degree(c.node)));
            weights.push_back(double(g.degree(c.node)) * (1.0 - sim) + 1e-9);
        }
        const auto& pick = cands[rng.weighted(weights)];
        seq.push_back({pick.edge, pick.forward});
        cur = pick.node;
        ledger.arrive(cur);
    }
    return detail::finish_walk(g, ledger, std::move(seq));
}

// m dependent walks; the walking slot is drawn with degree-proportional
// probability, then one incident edge uniformly.
inline SampledSubgraph sample_frontier(const AttributedGraph& g, std::uint64_t budget,
                                       std::uint64_t m, Rng& rng) {
    if (m < 1) throw InputError("frontier sampler needs m >= 1");
    if (m > budget) throw InputError("frontier sampler needs m <= budget");
    detail::VisitLedger ledger(g, budget);
    std::vector<TraversalStep> seq;
    auto idx = detail::sample_indices(g.node_count(), m, rng);
    std::vector<NodeId> frontier(idx.begin(), idx.end());
    for (NodeId v : frontier) ledger.arrive(v);
    std::vector<double> weights(frontier.size());
    while (!ledger.full()) {
        if (ledger.stalled()) {
            std::size_t slot = std::size_t(rng.below(frontier.size()));
            frontier[slot] = ledger.random_unvisited(rng);
            ledger.note_teleport();
            ledger.arrive(frontier[slot]);
            continue;
        }
        for (std::size_t i = 0; i < frontier.size(); ++i)
            weights[i] = double(g.degree(frontier[i]));
        std::size_t slot = rng.weighted(weights);
        const AdjEntry& a = detail::random_step(g, frontier[slot], rng);
        seq.push_back({a.edge, a.forward});
        frontier[slot] = a.neighbor;
        ledger.arrive(a.neighbor);
    }
    return detail::finish_walk(g, ledger, std::move(seq));
}

// ---------------------------------------------------------------------------
// Expansion samplers: SBS, FFS, CommunitySES, ShortestPathS
// ---------------------------------------------------------------------------

namespace detail {

// Shared BFS expansion: `fanout` decides how many unvisited neighbors each
// dequeued node recruits.
template <typename Fanout>
SampledSubgraph expand_bfs(const AttributedGraph& g, std::uint64_t budget, Rng& rng,
                           std::int64_t forced_seed, Fanout&& fanout) {
    VisitLedger ledger(g, budget);
    std::vector<TraversalStep> seq;
    std::queue<NodeId> frontier;
    auto reseed = [&] {
        NodeId s = forced_seed >= 0 && !ledger.seen(NodeId(forced_seed))
                       ? NodeId(forced_seed)
                       : ledger.random_unvisited(rng);
        ledger.arrive(s);
        frontier.push(s);
    };
    reseed();
    std::vector<NeighborRef> cands;
    while (!ledger.full()) {
        if (frontier.empty()) {
            ledger.note_teleport();
            reseed();
            continue;
        }
        NodeId v = frontier.front();
        frontier.pop();
        distinct_neighbors(g, v, rng, cands);
        std::erase_if(cands, [&](const NeighborRef& c) { return ledger.seen(c.node); });
        std::uint64_t want = std::min<std::uint64_t>(fanout(rng), cands.size());
        want = std::min(want, ledger.budget_left());
        auto chosen = sample_indices(cands.size(), want, rng);
        for (std::uint32_t ci : chosen) {
            const NeighborRef& c = cands[ci];
            if (ledger.seen(c.node)) continue;
            seq.push_back({c.edge, c.forward});
            ledger.arrive(c.node);
            frontier.push(c.node);
        }
    }
    return finish_walk(g, ledger, std::move(seq));
}

}  // namespace detail

inline SampledSubgraph sample_sbs(const AttributedGraph& g, std::uint64_t budget,
                                  std::uint64_t k, Rng& rng, std::int64_t seed_node = -1) {
    if (k < 1) throw InputError("sbs needs k >= 1");
    return detail::expand_bfs(g, budget, rng, seed_node, [k](Rng&) { return k; });
}

inline SampledSubgraph sample_ffs(const AttributedGraph& g, std::uint64_t budget,
                                  double burn_prob, Rng& rng, std::int64_t seed_node = -1) {
    if (!(burn_prob >= 0.0 && burn_prob < 1.0))
        throw InputError("ffs needs burn probability in [0,1)");
    // Geometric burn count with mean p/(1-p), Leskovec-style.
    return detail::expand_bfs(g, budget, rng, seed_node, [burn_prob](Rng& r) {
        std::uint64_t x = 0;
        while (r.chance(burn_prob)) ++x;
        return x;
    });
}

// Greedy community expansion: repeatedly admit the boundary node contributing
// the most nodes outside the current sample's closed neighborhood.
inline SampledSubgraph sample_community_se(const AttributedGraph& g, std::uint64_t budget,
                                           Rng& rng) {
    detail::VisitLedger ledger(g, budget);
    std::vector<TraversalStep> seq;
    std::vector<std::uint8_t> covered(g.node_count(), 0);   // S ∪ N(S)
    std::vector<std::int64_t> score(g.node_count(), -1);    // |N(x) − covered|, boundary only
    // Max score, ties to the smaller node id.
    std::priority_queue<std::pair<std::int64_t, std::int64_t>> heap;

    auto fresh_score = [&](NodeId x) {
        std::int64_t s = 0;
        NodeId last = kInvalidId;
        for (const AdjEntry& a : g.neighbors(x)) {
            if (a.neighbor == last) continue;
            last = a.neighbor;
            if (!covered[a.neighbor]) ++s;
        }
        return s;
    };

    auto admit = [&](NodeId v, bool is_seed) {
        if (!is_seed) {
            EdgeId via = kInvalidId;
            bool fwd = true;
            for (const AdjEntry& a : g.neighbors(v))
                if (ledger.seen(a.neighbor) && a.edge < via) { via = a.edge; fwd = !a.forward; }
            if (via != kInvalidId) seq.push_back({via, fwd});
        }
        ledger.arrive(v);
        covered[v] = 1;
        score[v] = -1;
        std::vector<NodeId> fresh;
        NodeId last = kInvalidId;
        for (const AdjEntry& a : g.neighbors(v)) {
            if (a.neighbor == last) continue;
            last = a.neighbor;
            if (!covered[a.neighbor]) {
                covered[a.neighbor] = 1;
                fresh.push_back(a.neighbor);
            }
        }
        // New boundary members get fresh scores; existing boundary members
        // adjacent to newly covered nodes lose one expansion point each.
        for (NodeId w : fresh) {
            NodeId wlast = kInvalidId;
            for (const AdjEntry& a : g.neighbors(w)) {
                if (a.neighbor == wlast) continue;
                wlast = a.neighbor;
                NodeId x = a.neighbor;
                if (score[x] >= 0 && !ledger.seen(x) &&
                    std::find(fresh.begin(), fresh.end(), x) == fresh.end()) {
                    score[x] -= 1;
                    heap.emplace(score[x], -std::int64_t(x));
                }
            }
        }
        for (NodeId w : fresh) {
            if (ledger.seen(w)) continue;
            score[w] = fresh_score(w);
            heap.emplace(score[w], -std::int64_t(w));
        }
    };

    admit(ledger.random_unvisited(rng), true);
    while (!ledger.full()) {
        NodeId next = kInvalidId;
        while (!heap.empty()) {
            auto [s, negid] = heap.top();
            NodeId x = NodeId(-negid);
            heap.pop();
            if (ledger.seen(x) || score[x] != s) continue;  // stale entry
            next = x;
            break;
        }
        if (next == kInvalidId) {
            ledger.note_teleport();
            admit(ledger.random_unvisited(rng), true);
            continue;
        }
        admit(next, false);
    }
    return detail::finish_walk(g, ledger, std::move(seq));
}

// BFS distances and shortest-path counts from s; backtracks a uniformly
// random shortest path to t (predecessors weighted by their path counts).
struct ShortestPathDraw {
    std::vector<NodeId> nodes;
    std::vector<TraversalStep> steps;
    bool reachable = false;
};

inline ShortestPathDraw sample_shortest_path(const AttributedGraph& g, NodeId s, NodeId t,
                                             Rng& rng) {
    ShortestPathDraw out;
    std::vector<std::int32_t> dist(g.node_count(), -1);
    std::vector<double> sigma(g.node_count(), 0.0);
    std::queue<NodeId> q;
    dist[s] = 0;
    sigma[s] = 1.0;
    q.push(s);
    while (!q.empty()) {
        NodeId v = q.front();
        q.pop();
        if (dist[t] >= 0 && dist[v] >= dist[t]) continue;
        for (const AdjEntry& a : g.neighbors(v)) {
            if (dist[a.neighbor] < 0) {
                dist[a.neighbor] = dist[v] + 1;
                q.push(a.neighbor);
            }
            if (dist[a.neighbor] == dist[v] + 1) sigma[a.neighbor] += sigma[v];
        }
    }
    if (dist[t] < 0) return out;
    out.reachable = true;
    std::vector<NodeId> rev{t};
    std::vector<TraversalStep> rev_steps;
    NodeId cur = t;
    std::vector<const AdjEntry*> pred_entries;
    std::vector<double> pred_w;
    while (cur != s) {
        pred_entries.clear();
        pred_w.clear();
        NodeId last = kInvalidId;
        for (const AdjEntry& a : g.neighbors(cur)) {
            if (dist[a.neighbor] != dist[cur] - 1) continue;
            pred_entries.push_back(&a);
            // Parallel edges each count as a route; weight per entry by the
            // predecessor's path count.
            pred_w.push_back(sigma[a.neighbor]);
            last = a.neighbor;
        }
        (void)last;
        const AdjEntry& a = *pred_entries[rng.weighted(pred_w)];
        // a points from cur toward the predecessor; the traversal direction
        // along the path is predecessor -> cur.
        rev_steps.push_back({a.edge, !a.forward});
        cur = a.neighbor;
        rev.push_back(cur);
    }
    out.nodes.assign(rev.rbegin(), rev.rend());
    out.steps.assign(rev_steps.rbegin(), rev_steps.rend());
    return out;
}

inline SampledSubgraph sample_shortest_paths(const AttributedGraph& g, std::uint64_t budget,
                                             Rng& rng) {
    detail::VisitLedger ledger(g, budget);
    std::vector<TraversalStep> seq;
    int dry_spells = 0;
    while (!ledger.full()) {
        if (dry_spells > 50) {
            ledger.note_teleport();
            ledger.arrive(ledger.random_unvisited(rng));
            dry_spells = 0;
            continue;
        }
        NodeId s = NodeId(rng.below(g.node_count()));
        NodeId t = NodeId(rng.below(g.node_count()));
        if (s == t) { ++dry_spells; continue; }
        ShortestPathDraw draw = sample_shortest_path(g, s, t, rng);
        if (!draw.reachable) { ++dry_spells; continue; }
        bool any_new = ledger.arrive(draw.nodes[0]);
        for (std::size_t i = 0; i < draw.steps.size() && !ledger.full(); ++i) {
            seq.push_back(draw.steps[i]);
            any_new = ledger.arrive(draw.nodes[i + 1]) || any_new;
        }
        dry_spells = any_new ? 0 : dry_spells + 1;
    }
    return detail::finish_walk(g, ledger, std::move(seq));
}

// ---------------------------------------------------------------------------
// Ground-truth pseudo-sample and the dispatcher
// ---------------------------------------------------------------------------

// Whole graph as a sample; the sequence traverses every edge once in each
// orientation, which makes the sequence-form estimators exact.
inline SampledSubgraph ground_truth_sample(const AttributedGraph& g) {
    SampledSubgraph s;
    s.nodes.resize(g.node_count());
    std::iota(s.nodes.begin(), s.nodes.end(), 0u);
    s.edges.resize(g.edge_count());
    std::iota(s.edges.begin(), s.edges.end(), 0u);
    s.sequence.reserve(2 * g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        s.sequence.push_back({e, true});
        s.sequence.push_back({e, false});
    }
    s.meta.kind = SamplerKind::GroundTruth;
    s.meta.family = SamplerFamily::EdgeSet;
    s.meta.budget = g.node_count();
    s.meta.charged = g.node_count();
    return s;
}

inline SampledSubgraph run_agnostic_sampler(const AttributedGraph& g, const SamplerSpec& spec,
                                            std::uint64_t seed) {
    if (g.node_count() == 0) throw InputError("cannot sample an empty graph");
    if (spec.kind != SamplerKind::GroundTruth) {
        if (spec.budget < 1) throw InputError("budget must be >= 1");
        if (spec.budget > g.node_count())
            throw InputError("budget " + std::to_string(spec.budget) + " exceeds |V| = " +
                             std::to_string(g.node_count()));
    }
    Rng rng(seed);
    auto started = std::chrono::steady_clock::now();
    SampledSubgraph s;
    switch (spec.kind) {
        case SamplerKind::RNS: s = sample_rns(g, spec.budget, rng); break;
        case SamplerKind::DBS: s = sample_dbs(g, spec.budget, rng); break;
        case SamplerKind::PRBS: s = sample_prbs(g, spec.budget, rng); break;
        case SamplerKind::RES: s = sample_res(g, spec.budget, rng); break;
        case SamplerKind::SRW: s = sample_srw(g, spec.budget, rng); break;
        case SamplerKind::NBRW: s = sample_nbrw(g, spec.budget, rng); break;
        case SamplerKind::RWR:
            s = sample_rwr(g, spec.budget, spec.param("restart_prob", 0.15), rng);
            break;
        case SamplerKind::MHRW: s = sample_mhrw(g, spec.budget, rng); break;
        case SamplerKind::CNARW: s = sample_cnarw(g, spec.budget, rng); break;
        case SamplerKind::FrontierS:
            s = sample_frontier(g, spec.budget, std::uint64_t(spec.param("m", 50)), rng);
            break;
        case SamplerKind::CommunitySES: s = sample_community_se(g, spec.budget, rng); break;
        case SamplerKind::SBS:
            s = sample_sbs(g, spec.budget, std::uint64_t(spec.param("k", 3)), rng,
                           std::int64_t(spec.param("seed_node", -1)));
            break;
        case SamplerKind::FFS:
            s = sample_ffs(g, spec.budget, spec.param("burn", 0.4), rng,
                           std::int64_t(spec.param("seed_node", -1)));
            break;
        case SamplerKind::ShortestPathS: s = sample_shortest_paths(g, spec.budget, rng); break;
        case SamplerKind::GroundTruth: s = ground_truth_sample(g); break;
        default:
            throw InputError("sampler requires a hypothesis; use run_sampler with one");
    }
    s.meta.kind = spec.kind;
    s.meta.family = sampler_family(spec.kind);
    if (spec.kind != SamplerKind::GroundTruth) s.meta.budget = spec.budget;
    s.meta.seed = seed;
    s.meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return s;
}

}  // namespace graphhypo

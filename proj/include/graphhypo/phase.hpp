#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <vector>

#include "graphhypo/estimate.hpp"
#include "graphhypo/graph.hpp"
#include "graphhypo/hypothesis.hpp"
#include "graphhypo/rng.hpp"
#include "graphhypo/sample.hpp"
#include "graphhypo/samplers.hpp"

namespace graphhypo {

struct PhaseParams {
    std::uint64_t m = 50;   // seed walks
    std::uint64_t n = 30;   // neighbor-candidate cap (PHASE_opt)
    double w_h = 10.0;
    double w_l = 0.1;

    void validate() const {
        if (m < 1) throw InputError("phase needs m >= 1");
        if (n < 1) throw InputError("phase needs n >= 1");
        if (!(w_h >= w_l && w_l > 0.0))
            throw InputError("phase weights need w_h >= w_l > 0");
    }
};

// Pattern-prefix automaton over node clauses. The state q is the length of
// the longest suffix of the walk history matching a prefix of the clauses;
// a completed match wraps to its longest proper re-match, so q stays in
// [0, l]. Clause equality (type + modifiers) drives the failure links,
// node-clause matching drives the transitions.
class PatternAutomaton {
public:
    explicit PatternAutomaton(const PathPattern& pattern) : pattern_(&pattern) {
        const auto& clauses = pattern.steps;
        std::size_t L = clauses.size();
        fail_.assign(L + 1, 0);
        for (std::size_t i = 1; i < L; ++i) {
            std::size_t k = fail_[i];
            while (k > 0 && !(clauses[i] == clauses[k])) k = fail_[k];
            if (clauses[i] == clauses[k]) ++k;
            fail_[i + 1] = k;
        }
    }

    std::size_t max_state() const { return pattern_->steps.size() - 1; }

    // Next state after the walk visits `v` from state q.
    std::size_t advance(const AttributedGraph& g, std::size_t q, NodeId v) const {
        const auto& clauses = pattern_->steps;
        std::size_t L = clauses.size();
        std::size_t k = q;
        while (true) {
            if (k < L && node_matches(g, v, clauses[k])) {
                ++k;
                break;
            }
            if (k == 0) break;
            k = fail_[k];
        }
        if (k == L) k = fail_[L];  // full match wraps to the longest proper re-match
        return k;
    }

private:
    const PathPattern* pattern_;
    std::vector<std::size_t> fail_;
};

// Transition weight for a candidate move (Q): w_h goes to the candidate that
// extends the matched prefix — it must match clause q+1 and, when q >= 1, be
// reached through an edge of the pattern's connecting type and direction.
// Everything else gets w_l.
inline double transition_weight(const AttributedGraph& g, const Hypothesis& h,
                                std::size_t q, const detail::NeighborRef& cand,
                                const PhaseParams& params) {
    const auto& clauses = h.pattern.steps;
    if (!node_matches(g, cand.node, clauses[q])) return params.w_l;
    if (q >= 1) {
        const EdgeClause& link = h.pattern.links[q - 1];
        if (g.edge_type(cand.edge) != TypeId(link.type_id)) return params.w_l;
        if (cand.forward != link.forward) return params.w_l;
    }
    return params.w_h;
}

// Seed weights (Algorithm 1 line 2): w_h to seeds matching the first clause.
inline std::vector<double> assign_seed_weights(const AttributedGraph& g,
                                               std::span<const NodeId> seeds,
                                               const Hypothesis& h,
                                               const PhaseParams& params) {
    std::vector<double> w(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i)
        w[i] = node_matches(g, seeds[i], h.pattern.steps[0]) ? params.w_h : params.w_l;
    return w;
}

namespace detail {

struct PhaseState {
    std::vector<NodeId> frontier;
    std::vector<double> frontier_w;
    std::vector<std::size_t> match_state;
    std::vector<std::uint8_t> in_sample;
    std::vector<NodeId> order;
    std::vector<TraversalStep> sequence;
    std::uint64_t weight_evals = 0;
    std::uint64_t max_step_weight_evals = 0;
    std::uint64_t teleports = 0;

    void add(NodeId v) {
        if (!in_sample[v]) {
            in_sample[v] = 1;
            order.push_back(v);
        }
    }
};

template <bool Opt>
SampledSubgraph phase_run(const AttributedGraph& g, const Hypothesis& h,
                          std::uint64_t budget, const PhaseParams& params, Rng& rng) {
    params.validate();
    if (!h.bound) throw InputError("hypothesis must be bound to the graph schema");
    if (budget < params.m)
        throw InputError("phase needs budget >= m (" + std::to_string(budget) + " < " +
                         std::to_string(params.m) + ")");
    if (params.m > g.node_count()) throw InputError("phase needs m <= |V|");

    PatternAutomaton automaton(h.pattern);
    PhaseState st;
    st.in_sample.assign(g.node_count(), 0);

    auto seed_idx = detail::sample_indices(g.node_count(), params.m, rng);
    st.frontier.assign(seed_idx.begin(), seed_idx.end());
    st.frontier_w = assign_seed_weights(g, st.frontier, h, params);
    st.match_state.resize(params.m);
    for (std::size_t i = 0; i < params.m; ++i)
        st.match_state[i] = automaton.advance(g, 0, st.frontier[i]);

    std::vector<detail::NeighborRef> neigh, pool;
    std::vector<double> weights;

    // Algorithm 1 runs B - m steps; sampled nodes enter V_S only when a step
    // touches them, so budget == m legitimately yields an empty sample.
    for (std::uint64_t it = params.m; it < budget; ++it) {
        std::size_t slot = rng.weighted(st.frontier_w);
        NodeId v = st.frontier[slot];
        detail::distinct_neighbors(g, v, rng, neigh);
        if (neigh.empty()) {
            NodeId fresh = NodeId(rng.below(g.node_count()));
            st.frontier[slot] = fresh;
            st.frontier_w[slot] =
                node_matches(g, fresh, h.pattern.steps[0]) ? params.w_h : params.w_l;
            st.match_state[slot] = automaton.advance(g, 0, fresh);
            ++st.teleports;
            continue;
        }

        const detail::NeighborRef* chosen = nullptr;
        std::size_t q = st.match_state[slot];
        if constexpr (Opt) {
            pool.clear();
            for (const auto& c : neigh)
                if (!st.in_sample[c.node]) pool.push_back(c);
            // Algorithm 2: N' = N[v] − V_S, then at most n uniform candidates.
            // An exhausted N' falls back to candidates from the full N[v].
            std::vector<detail::NeighborRef>& src = pool.empty() ? neigh : pool;
            std::uint64_t take = std::min<std::uint64_t>(params.n, src.size());
            if (take < src.size()) {
                auto idx = detail::sample_indices(src.size(), take, rng);
                weights.clear();
                std::vector<detail::NeighborRef> cands;
                cands.reserve(take);
                for (auto i : idx) cands.push_back(src[i]);
                for (const auto& c : cands)
                    weights.push_back(transition_weight(g, h, q, c, params));
                st.weight_evals += cands.size();
                st.max_step_weight_evals =
                    std::max<std::uint64_t>(st.max_step_weight_evals, cands.size());
                std::size_t pick = rng.weighted(weights);
                chosen = &src[idx[pick]];
            } else {
                weights.clear();
                for (const auto& c : src)
                    weights.push_back(transition_weight(g, h, q, c, params));
                st.weight_evals += src.size();
                st.max_step_weight_evals =
                    std::max<std::uint64_t>(st.max_step_weight_evals, src.size());
                chosen = &src[rng.weighted(weights)];
            }
        } else {
            weights.clear();
            for (const auto& c : neigh)
                weights.push_back(transition_weight(g, h, q, c, params));
            st.weight_evals += neigh.size();
            st.max_step_weight_evals =
                std::max<std::uint64_t>(st.max_step_weight_evals, neigh.size());
            chosen = &neigh[rng.weighted(weights)];
        }

        NodeId u = chosen->node;
        st.add(v);
        st.add(u);
        st.sequence.push_back({chosen->edge, chosen->forward});
        st.match_state[slot] = automaton.advance(g, q, u);
        st.frontier[slot] = u;
        st.frontier_w[slot] =
            node_matches(g, u, h.pattern.steps[0]) ? params.w_h : params.w_l;
    }

    SampledSubgraph s = induced_subgraph(g, st.order);
    s.sequence = std::move(st.sequence);
    s.meta.charged = s.nodes.size();
    s.meta.weight_evals = st.weight_evals;
    s.meta.max_step_weight_evals = st.max_step_weight_evals;
    s.meta.teleports = st.teleports;
    return s;
}

}  // namespace detail

inline SampledSubgraph phase_sample(const AttributedGraph& g, const Hypothesis& h,
                                    std::uint64_t budget, const PhaseParams& params,
                                    Rng& rng) {
    return detail::phase_run<false>(g, h, budget, params, rng);
}

inline SampledSubgraph phase_opt_sample(const AttributedGraph& g, const Hypothesis& h,
                                        std::uint64_t budget, const PhaseParams& params,
                                        Rng& rng) {
    return detail::phase_run<true>(g, h, budget, params, rng);
}

inline PhaseParams phase_params_from_spec(const SamplerSpec& spec) {
    PhaseParams p;
    p.m = std::uint64_t(spec.param("m", 50));
    p.n = std::uint64_t(spec.param("n", 30));
    p.w_h = spec.param("w_h", 10.0);
    p.w_l = spec.param("w_l", 0.1);
    return p;
}

// Full dispatcher; hypothesis-aware kinds require `h`.
inline SampledSubgraph run_sampler(const AttributedGraph& g, const SamplerSpec& spec,
                                   std::uint64_t seed, const Hypothesis* h = nullptr) {
    if (spec.kind != SamplerKind::PHASE && spec.kind != SamplerKind::PHASE_OPT)
        return run_agnostic_sampler(g, spec, seed);
    if (h == nullptr)
        throw InputError("phase samplers require a hypothesis");
    if (spec.budget > g.node_count())
        throw InputError("budget exceeds |V|");
    Rng rng(seed);
    auto started = std::chrono::steady_clock::now();
    PhaseParams params = phase_params_from_spec(spec);
    SampledSubgraph s = spec.kind == SamplerKind::PHASE
                            ? phase_sample(g, *h, spec.budget, params, rng)
                            : phase_opt_sample(g, *h, spec.budget, params, rng);
    s.meta.kind = spec.kind;
    s.meta.family = SamplerFamily::Walk;
    s.meta.budget = spec.budget;
    s.meta.seed = seed;
    s.meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return s;
}

}  // namespace graphhypo

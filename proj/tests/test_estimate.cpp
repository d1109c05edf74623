#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "graphhypo/estimate.hpp"
#include "graphhypo/samplers.hpp"
#include "graphhypo/synth.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace graphhypo;

namespace {

SampledSubgraph walk_sample_of(const AttributedGraph& g, std::vector<NodeId> nodes,
                               std::vector<TraversalStep> seq) {
    SampledSubgraph s = induced_subgraph(g, nodes);
    s.sequence = std::move(seq);
    s.meta.kind = SamplerKind::SRW;
    s.meta.family = SamplerFamily::Walk;
    return s;
}

}  // namespace

TEST_CASE("relevant node extraction", "[estimate]") {
    auto g = fixtures::user_movie();
    auto h = fixtures::hyp(g, "avg(step1.age | user[gender=F]) > 20");
    auto nodes = relevant_nodes(GraphView(g), h.pattern.steps[0]);
    CHECK(nodes == std::vector<NodeId>{0, 2});

    auto none = fixtures::hyp(g, "avg(step1.age | user[age>200]) > 20");
    CHECK(relevant_nodes(GraphView(g), none.pattern.steps[0]).empty());
}

TEST_CASE("path enumeration on the author-paper-author fixture", "[estimate]") {
    auto g = fixtures::author_paper();
    auto h = fixtures::hyp(g,
                           "avg(step2.citation | author[org=MSR] <-Authorship- paper[] "
                           "-Authorship-> author[org=MSR]) > 100");
    std::vector<std::vector<NodeId>> seen;
    auto st = enumerate_paths(GraphView(g), h.pattern, 1000, [&](const PathInstance& inst) {
        seen.emplace_back(inst.nodes.begin(), inst.nodes.end());
    });
    // Two ordered instances: (a0,p0,a1) and (a1,p0,a0).
    CHECK(st.count == 2);
    CHECK_FALSE(st.truncated);
    REQUIRE(seen.size() == 2);
    CHECK(seen[0] == std::vector<NodeId>{0, 2, 1});
    CHECK(seen[1] == std::vector<NodeId>{1, 2, 0});

    auto est = estimate_path(g, ground_truth_sample(g), h);
    REQUIRE(est.value);
    CHECK(*est.value == 120.0);
    CHECK(est.n_relevant == 2);
}

TEST_CASE("triangle of one type yields six ordered simple instances", "[estimate]") {
    auto g = fixtures::triangle_graph();
    // Direction-agnostic traversal needs both orientations in the pattern;
    // use two links with matching types but the pattern must fix directions.
    // The triangle has edges 0->1, 1->2, 0->2; enumerate all l=2 patterns over
    // both orientations and count the distinct ordered node triples.
    std::vector<std::vector<NodeId>> triples;
    for (bool f1 : {true, false})
        for (bool f2 : {true, false}) {
            PathPattern p;
            for (int i = 0; i < 3; ++i) {
                NodeClause c;
                c.type_name = "node";
                c.type_id = 0;
                p.steps.push_back(c);
            }
            EdgeClause l1, l2;
            l1.type_name = l2.type_name = "link";
            l1.type_id = l2.type_id = 0;
            l1.forward = f1;
            l2.forward = f2;
            p.links = {l1, l2};
            enumerate_paths(GraphView(g), p, 1000, [&](const PathInstance& inst) {
                triples.emplace_back(inst.nodes.begin(), inst.nodes.end());
            });
        }
    std::sort(triples.begin(), triples.end());
    CHECK(triples.size() == 6);
    CHECK(std::unique(triples.begin(), triples.end()) == triples.end());
}

TEST_CASE("unsatisfiable middle clause yields no paths", "[estimate]") {
    auto g = fixtures::user_movie();
    auto h = fixtures::hyp(
        g, "avg(step1.age | user[] -Rates-> movie[year>3000] <-Rates- user[]) > 0");
    auto st = enumerate_paths(GraphView(g), h.pattern, 1000, [](const PathInstance&) {});
    CHECK(st.count == 0);
}

TEST_CASE("enumeration limit raises an explicit truncation signal", "[estimate]") {
    auto g = fixtures::user_movie();
    auto h = fixtures::hyp(g, "avg(edge1.rating | user[] -Rates-> movie[]) > 0");
    auto st = enumerate_paths(GraphView(g), h.pattern, 2, [](const PathInstance&) {});
    CHECK(st.truncated);
    CHECK(st.count == 2);

    EstimateOptions opts;
    opts.path_limit = 2;
    auto est = estimate_path(g, ground_truth_sample(g), h, opts);
    CHECK(est.truncated);
}

TEST_CASE("enumerator matches the naive recursive oracle on random graphs",
          "[estimate][property]") {
    Rng rng(404);
    int graphs_checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 8 + rng.below(42);  // the graph ends up with <= 50 nodes
        std::size_t m = n + rng.below(2 * n);
        nlohmann::ordered_json cfg{
            {"seed", 1000 + trial},
            {"node_types",
             {{{"name", "a"}, {"count", n / 2 + 1}, {"attrs", nlohmann::ordered_json::array()}},
              {{"name", "b"}, {"count", n - n / 2 - 1 + 1},
               {"attrs", nlohmann::ordered_json::array()}}}},
            {"edge_types",
             {{{"name", "ab"}, {"src", "a"}, {"dst", "b"}, {"count", m / 2 + 1}},
              {{"name", "aa"}, {"src", "a"}, {"dst", "a"}, {"count", m / 4 + 1}}}}};
        AttributedGraph g = generate_graph(cfg);
        // Random pattern of length 1..4 alternating feasibly between types.
        std::size_t l = 1 + rng.below(4);
        PathPattern p;
        bool on_a = true;
        NodeClause ca, cb;
        ca.type_name = "a";
        ca.type_id = 0;
        cb.type_name = "b";
        cb.type_id = 1;
        p.steps.push_back(ca);
        for (std::size_t i = 0; i < l; ++i) {
            EdgeClause link;
            if (on_a && rng.chance(0.5)) {
                link.type_name = "ab";
                link.type_id = 0;
                link.forward = true;
                p.links.push_back(link);
                p.steps.push_back(cb);
                on_a = false;
            } else if (on_a) {
                link.type_name = "aa";
                link.type_id = 1;
                link.forward = rng.chance(0.5);
                p.links.push_back(link);
                p.steps.push_back(ca);
            } else {
                link.type_name = "ab";
                link.type_id = 0;
                link.forward = false;
                p.links.push_back(link);
                p.steps.push_back(ca);
                on_a = true;
            }
        }
        std::vector<oracles::Instance> got;
        enumerate_paths(GraphView(g), p, 1u << 22, [&](const PathInstance& inst) {
            got.emplace_back(std::vector<NodeId>(inst.nodes.begin(), inst.nodes.end()),
                             std::vector<EdgeId>(inst.edges.begin(), inst.edges.end()));
        });
        std::sort(got.begin(), got.end());
        auto expected = oracles::naive_paths(g, p);
        REQUIRE(got == expected);
        ++graphs_checked;
    }
    CHECK(graphs_checked == 100);
}

TEST_CASE("node estimate over a traversal sequence", "[estimate]") {
    auto g = fixtures::user_movie();
    auto h = fixtures::hyp(g, "avg(step1.age | user[gender=F]) > 20");

    SECTION("single relevant visit") {
        // Edge 0 is u0 -> m0; walking backward arrives at u0 (age 30, F).
        auto s = walk_sample_of(g, {0, 3}, {{0, false}});
        auto est = estimate_node(g, s, h);
        REQUIRE(est.value);
        CHECK(*est.value == 30.0);
        CHECK(est.n_relevant == 1);
    }
    SECTION("full both-direction traversal reproduces the exact mean") {
        auto est = estimate_node_from_sequence(g, ground_truth_sample(g).sequence, h);
        REQUIRE(est.value);
        CHECK_THAT(*est.value, Catch::Matchers::WithinRel(27.5, 1e-9));  // (30+25)/2
    }
    SECTION("no relevant visit is inconclusive") {
        auto s = walk_sample_of(g, {1, 3}, {{1, false}});  // arrives at u1 (M)
        auto est = estimate_node(g, s, h);
        CHECK(est.inconclusive);
        CHECK_FALSE(est.value.has_value());
        CHECK(est.n_relevant == 0);
    }
    SECTION("full coverage switches to the exact subgraph aggregate") {
        std::vector<NodeId> all(g.node_count());
        std::iota(all.begin(), all.end(), 0u);
        auto s = walk_sample_of(g, all, {{0, false}});  // sequence would be biased
        auto est = estimate_node(g, s, h);
        REQUIRE(est.value);
        CHECK_THAT(*est.value, Catch::Matchers::WithinRel(27.5, 1e-9));
    }
}

TEST_CASE("sequence estimator converges to the degree-weighted mean under the literal "
          "denominator",
          "[estimate]") {
    auto g = fixtures::user_movie();
    auto h = fixtures::hyp(g, "avg(step1.age | user[]) > 0");
    auto gt = ground_truth_sample(g);
    EstimateOptions lit;
    lit.literal_eq2 = true;
    auto est = estimate_node_from_sequence(g, gt.sequence, h, lit);
    // Literal variant: sum(age/deg) / count over user arrivals
    // = (30/1 + 40/2 + 40/2 + 25/1) / 4.
    REQUIRE(est.value);
    CHECK_THAT(*est.value, Catch::Matchers::WithinRel((30.0 + 20 + 20 + 25) / 4.0, 1e-12));
    auto self_norm = estimate_node_from_sequence(g, gt.sequence, h);
    CHECK_THAT(*self_norm.value, Catch::Matchers::WithinRel((30 + 40 + 25) / 3.0, 1e-12));
}

TEST_CASE("node estimate from a node-set sample", "[estimate]") {
    auto g = fixtures::user_movie();
    auto h = fixtures::hyp(g, "avg(step1.age | user[gender=F]) > 20");
    std::vector<NodeId> set{0, 1, 2};
    auto s = induced_subgraph(g, set);
    s.meta.family = SamplerFamily::NodeSet;
    auto est = estimate_node(g, s, h);
    REQUIRE(est.value);
    CHECK(*est.value == 27.5);
    CHECK(est.n_relevant == 2);
}

TEST_CASE("edge estimate", "[estimate]") {
    auto g = fixtures::user_movie();
    auto h = fixtures::hyp(g, "avg(edge1.rating | user[] -Rates-> movie[]) > 0.5");

    SECTION("two relevant sampled edges") {
        SampledSubgraph s;
        s.nodes = {0, 1, 3};
        s.edges = {0, 1};  // ratings 4 and 3
        s.meta.family = SamplerFamily::EdgeSet;
        auto est = estimate_edge(g, s, h);
        REQUIRE(est.value);
        CHECK(*est.value == 3.5);
    }
    SECTION("full coverage reproduces the exact mean") {
        auto est = estimate_edge(g, ground_truth_sample(g), h);
        REQUIRE(est.value);
        CHECK_THAT(*est.value, Catch::Matchers::WithinRel(3.5, 1e-9));  // (4+3+5+2)/4
    }
    SECTION("zero relevant edges is inconclusive") {
        auto hf = fixtures::hyp(g, "avg(edge1.rating | user[age>100] -Rates-> movie[]) > 0.5");
        auto est = estimate_edge(g, ground_truth_sample(g), hf);
        CHECK(est.inconclusive);
    }
    SECTION("direction matters") {
        auto hb = fixtures::hyp(g, "avg(edge1.rating | movie[] <-Rates- user[age>35]) > 0");
        auto est = estimate_edge(g, ground_truth_sample(g), hb);
        REQUIRE(est.value);
        CHECK(*est.value == 4.0);  // u1's two ratings: (3+5)/2
    }
}

TEST_CASE("path estimate agrees with edge estimate at l=1", "[estimate][property]") {
    nlohmann::ordered_json cfg = nlohmann::ordered_json::parse(R"({
      "seed": 17,
      "node_types": [
        {"name": "u", "count": 40, "attrs": [{"name": "a", "dist": "uniform", "lo": 0, "hi": 9}]},
        {"name": "v", "count": 30, "attrs": []}
      ],
      "edge_types": [{"name": "uv", "src": "u", "dst": "v", "count": 120,
                       "attrs": [{"name": "w", "dist": "uniform", "lo": 0, "hi": 1}]}]
    })");
    AttributedGraph g = generate_graph(cfg);
    auto h = parse_hypothesis("avg(edge1.w | u[a>3] -uv-> v[]) > 0.5", g.schema(), &g);
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        SamplerSpec spec;
        spec.kind = SamplerKind::SRW;
        spec.budget = 25;
        auto s = run_sampler(g, spec, seed);
        auto via_edge = estimate_edge(g, s, h);
        auto via_path = estimate_path(g, s, h);
        CHECK(via_edge.inconclusive == via_path.inconclusive);
        if (!via_edge.inconclusive) {
            CHECK(via_edge.n_relevant == via_path.n_relevant);
            CHECK(*via_edge.value == *via_path.value);
        }
    }
}

TEST_CASE("path estimate basics", "[estimate]") {
    auto g = fixtures::user_movie();

    SECTION("mean of relevant path values") {
        auto h = fixtures::hyp(
            g, "avg(mean(step1.age, step3.age) | user[] -Rates-> movie[] <-Rates- user[]) > 0");
        auto est = estimate_path(g, ground_truth_sample(g), h);
        REQUIRE(est.value);
        // Paths: (u0,m0,u1) & (u1,m0,u0): mean 35; (u1,m1,u2) & (u2,m1,u1): 32.5.
        CHECK_THAT(*est.value, Catch::Matchers::WithinRel(33.75, 1e-12));
        CHECK(est.n_relevant == 4);
    }
    SECTION("min aggregate over relevant values") {
        auto h = fixtures::hyp(
            g, "min(mean(step1.age, step3.age) | user[] -Rates-> movie[] <-Rates- user[]) > 0");
        auto est = estimate_path(g, ground_truth_sample(g), h);
        REQUIRE(est.value);
        CHECK(*est.value == 32.5);
    }
}

TEST_CASE("estimator is invariant to traversal-sequence permutation",
          "[estimate][property]") {
    auto g = fixtures::user_movie();
    auto h = fixtures::hyp(g, "avg(step1.age | user[]) > 0");
    std::vector<TraversalStep> seq = ground_truth_sample(g).sequence;
    auto base = estimate_node_from_sequence(g, seq, h);
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        for (std::size_t i = seq.size(); i > 1; --i)
            std::swap(seq[i - 1], seq[rng.below(i)]);
        auto est = estimate_node_from_sequence(g, seq, h);
        CHECK_THAT(*est.value, Catch::Matchers::WithinRel(*base.value, 1e-9));
    }
}

TEST_CASE("contribution dump carries per-element values", "[estimate]") {
    auto g = fixtures::user_movie();
    auto h = fixtures::hyp(g, "avg(step1.age | user[gender=F]) > 20");
    EstimateOptions opts;
    opts.collect_contributions = true;
    std::vector<NodeId> set{0, 1, 2};
    auto s = induced_subgraph(g, set);
    s.meta.family = SamplerFamily::NodeSet;
    auto est = estimate_node(g, s, h, opts);
    REQUIRE(est.contributions.size() == 2);
    CHECK(est.contributions[0].element == "u0");
    CHECK(est.contributions[0].value == 30.0);
}

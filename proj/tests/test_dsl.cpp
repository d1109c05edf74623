#include <catch2/catch_amalgamated.hpp>

#include "graphhypo/hypothesis_parse.hpp"
#include "graphhypo/rng.hpp"
#include "support/fixtures.hpp"

using namespace graphhypo;

TEST_CASE("node hypothesis parses with type-name sugar", "[dsl]") {
    auto g = fixtures::author_paper();
    // Schema here: author(org), paper(citation); adapt the journal example.
    auto h = parse_hypothesis("avg(paper.citation | paper[citation>=0]) > 20", g.schema(), &g);
    CHECK(h.length() == 0);
    CHECK(h.constant == 20.0);
    CHECK(h.op == PredOp::Gt);
    CHECK(h.agg == Agg::Avg);
    CHECK(h.target.kind == Expr::Kind::NodeAttr);
    CHECK(h.target.ref_index == 0);
    CHECK(print_hypothesis(h) == "avg(step1.citation | paper[citation>=0]) > 20");
}

TEST_CASE("edge hypothesis parses as l=1", "[dsl]") {
    auto g = fixtures::user_movie();
    auto h = parse_hypothesis(
        "avg(edge1.rating | user[gender=F] -Rates-> movie[year<2000]) > 0.5", g.schema(), &g);
    CHECK(h.length() == 1);
    CHECK(h.pattern.links[0].forward);
    CHECK(h.pattern.links[0].type_name == "Rates");
    CHECK(h.constant == 0.5);
}

TEST_CASE("path hypothesis with an inverse relation parses as l=2", "[dsl]") {
    auto g = fixtures::author_paper();
    auto h = parse_hypothesis(
        "avg(step2.citation | author[org=MSR] <-Authorship- paper[] -Authorship-> "
        "author[org=MSR]) > 100",
        g.schema(), &g);
    CHECK(h.length() == 2);
    CHECK_FALSE(h.pattern.links[0].forward);
    CHECK(h.pattern.links[1].forward);
    CHECK(h.pattern.steps[1].modifiers.empty());
    CHECK(h.constant == 100.0);
}

TEST_CASE("syntax errors carry positions", "[dsl]") {
    CHECK_THROWS_AS(parse_hypothesis("avg(paper.citation |) > 1"), ParseError);
    CHECK_THROWS_AS(parse_hypothesis("avg(paper.citation) > 1"), ParseError);
    CHECK_THROWS_AS(parse_hypothesis("mid(x.y | t[]) > 1"), ParseError);
    CHECK_THROWS_AS(parse_hypothesis("avg(x.y | t[]) >"), ParseError);
    CHECK_THROWS_AS(parse_hypothesis("avg(step9.y | t[]) > 1"), ParseError);
    try {
        parse_hypothesis("avg(paper.citation |) > 1");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 20);
    }
}

TEST_CASE("binding rejects unknown names and bad kinds", "[dsl]") {
    auto g = fixtures::user_movie();
    CHECK_THROWS_WITH(parse_hypothesis("avg(step1.age | ghost[]) > 1", g.schema(), &g),
                      Catch::Matchers::ContainsSubstring("unknown node type"));
    CHECK_THROWS_WITH(parse_hypothesis("avg(step1.height | user[]) > 1", g.schema(), &g),
                      Catch::Matchers::ContainsSubstring("unknown attribute"));
    CHECK_THROWS_WITH(parse_hypothesis("avg(step1.gender | user[]) > 1", g.schema(), &g),
                      Catch::Matchers::ContainsSubstring("not numeric"));
    CHECK_THROWS_WITH(
        parse_hypothesis("avg(step1.age | user[gender>F]) > 1", g.schema(), &g),
        Catch::Matchers::ContainsSubstring("only = and <>"));
    CHECK_THROWS_WITH(
        parse_hypothesis("avg(step1.age | user[] -Rates-> user[]) > 1", g.schema(), &g),
        Catch::Matchers::ContainsSubstring("does not connect"));
}

TEST_CASE("node_matches honors type, modifiers, and missing attributes", "[dsl]") {
    auto g = fixtures::user_movie();
    auto h = fixtures::hyp(g, "avg(step1.age | user[gender=F]) > 20");
    const NodeClause& female = h.pattern.steps[0];
    CHECK(node_matches(g, 0, female));        // u0 F
    CHECK_FALSE(node_matches(g, 1, female));  // u1 M
    CHECK(node_matches(g, 2, female));        // u2 F
    CHECK_FALSE(node_matches(g, 3, female));  // movie: type mismatch

    auto empty = fixtures::hyp(g, "avg(step1.age | user[]) > 20");
    for (NodeId v = 0; v < 3; ++v) CHECK(node_matches(g, v, empty.pattern.steps[0]));

    // Numeric threshold modifier.
    auto age = fixtures::hyp(g, "avg(step1.age | user[age>26]) > 20");
    CHECK(node_matches(g, 0, age.pattern.steps[0]));
    CHECK_FALSE(node_matches(g, 2, age.pattern.steps[0]));

    // Unknown category literal matches nothing with '=', everything with '<>'.
    auto ghost = fixtures::hyp(g, "avg(step1.age | user[gender=X]) > 20");
    CHECK_FALSE(node_matches(g, 0, ghost.pattern.steps[0]));
    auto not_ghost = fixtures::hyp(g, "avg(step1.age | user[gender<>X]) > 20");
    CHECK(node_matches(g, 0, not_ghost.pattern.steps[0]));
}

TEST_CASE("missing attribute is a mismatch, not an error", "[dsl]") {
    GraphSchema s;
    s.node_types.push_back({"t", {{"a", AttrKind::Number}}});
    s.edge_types.push_back({"e", 0, 0, {}});
    GraphBuilder b(s);
    std::vector<std::pair<std::string, AttrValue>> with{{"a", 1.0}}, without{};
    b.add_node("x", 0, with);
    b.add_node("y", 0, without);
    b.add_edge(0, 1, 0, {});
    auto g = b.build();
    auto h = fixtures::hyp(g, "avg(step1.a | t[a>=0]) > 0");
    CHECK(node_matches(g, 0, h.pattern.steps[0]));
    CHECK_FALSE(node_matches(g, 1, h.pattern.steps[0]));
}

TEST_CASE("eval_target arithmetic", "[dsl]") {
    auto g = fixtures::user_movie();

    SECTION("single step attribute") {
        auto h = fixtures::hyp(g, "avg(step1.age | user[]) > 0");
        NodeId n[1] = {1};
        CHECK(eval_target(g, h, PathInstance{n, {}}) == 40.0);
    }
    SECTION("edge rating difference along a path") {
        auto h = fixtures::hyp(
            g, "avg(edge1.rating - edge2.rating | user[] -Rates-> movie[] <-Rates- user[]) > 0");
        // u0 -e0-> m0 <-e1- u1: ratings 4 and 3.
        NodeId n[3] = {0, 3, 1};
        EdgeId e[2] = {0, 1};
        CHECK(eval_target(g, h, PathInstance{n, e}) == 1.0);
    }
    SECTION("binary mean") {
        auto h = fixtures::hyp(
            g, "avg(mean(step1.age, step3.age) | user[] -Rates-> movie[] <-Rates- user[]) > 0");
        NodeId n[3] = {0, 3, 1};  // ages 30 and 40
        EdgeId e[2] = {0, 1};
        CHECK(eval_target(g, h, PathInstance{n, e}) == 35.0);
    }
    SECTION("division by zero") {
        auto h = fixtures::hyp(g, "avg(step1.age / (step1.age - step1.age) | user[]) > 0");
        NodeId n[1] = {0};
        CHECK_THROWS_AS(eval_target(g, h, PathInstance{n, {}}), EvalError);
    }
    SECTION("missing numeric attribute") {
        GraphSchema s;
        s.node_types.push_back({"t", {{"a", AttrKind::Number}}});
        s.edge_types.push_back({"e", 0, 0, {}});
        GraphBuilder b(s);
        std::vector<std::pair<std::string, AttrValue>> empty{};
        b.add_node("x", 0, empty);
        b.add_node("y", 0, empty);
        b.add_edge(0, 1, 0, {});
        auto g2 = b.build();
        auto h = fixtures::hyp(g2, "avg(step1.a | t[]) > 0");
        NodeId n[1] = {0};
        CHECK_THROWS_AS(eval_target(g2, h, PathInstance{n, {}}), EvalError);
    }
}

TEST_CASE("printing is idempotent and round trips", "[dsl]") {
    auto g = fixtures::user_movie();
    for (const char* text : {
             "avg(step1.age | user[gender=F]) > 20",
             "min(edge1.rating | user[age>=30;gender<>F] -Rates-> movie[]) < 3.5",
             "max(step1.age * 2 - step3.age / 4 | user[] -Rates-> movie[year<2000] "
             "<-Rates- user[]) <> 10",
             "avg(mean(step1.age, step3.age) + 1.5 | user[] -Rates-> movie[] <-Rates- "
             "user[]) = -2",
         }) {
        Hypothesis h = parse_hypothesis(text);
        std::string printed = print_hypothesis(h);
        Hypothesis reparsed = parse_hypothesis(printed);
        CHECK(reparsed == h);
        CHECK(print_hypothesis(reparsed) == printed);
    }
}

namespace {

// Random hypothesis generator against the user/movie schema, for the
// round-trip property.
Hypothesis random_hypothesis(Rng& rng) {
    Hypothesis h;
    std::size_t l = rng.below(4);
    auto clause = [&](bool user) {
        NodeClause c;
        c.type_name = user ? "user" : "movie";
        for (std::size_t i = rng.below(3); i > 0; --i) {
            Modifier m;
            if (user && rng.chance(0.5)) {
                m.attr = "gender";
                m.cmp = rng.chance(0.5) ? Cmp::Eq : Cmp::Ne;
                m.value = std::string(rng.chance(0.5) ? "F" : "M");
            } else {
                m.attr = user ? "age" : "year";
                m.cmp = static_cast<Cmp>(rng.below(6));
                m.value = double(std::int64_t(rng.below(200)) - 100) / 4.0;
            }
            c.modifiers.push_back(std::move(m));
        }
        return c;
    };
    bool user_first = true;
    h.pattern.steps.push_back(clause(user_first));
    for (std::size_t i = 0; i < l; ++i) {
        EdgeClause link;
        link.type_name = "Rates";
        // Alternate user/movie; link direction must leave from the user side.
        link.forward = user_first;
        h.pattern.links.push_back(link);
        user_first = !user_first;
        h.pattern.steps.push_back(clause(user_first));
    }
    // Random expression tree over valid refs.
    auto ref = [&]() {
        Expr e;
        if (l >= 1 && rng.chance(0.3)) {
            e.kind = Expr::Kind::EdgeAttr;
            e.ref_index = rng.below(l);
            e.attr = "rating";
        } else {
            e.kind = Expr::Kind::NodeAttr;
            // Pick a user step (even offsets when user_first started true).
            std::vector<std::size_t> users;
            for (std::size_t i = 0; i <= l; ++i)
                if (i % 2 == 0) users.push_back(i);
            e.ref_index = users[rng.below(users.size())];
            e.attr = "age";
        }
        return e;
    };
    auto expr = [&](auto&& self, int depth) -> Expr {
        if (depth >= 2 || rng.chance(0.4)) {
            if (rng.chance(0.25)) {
                Expr c;
                c.kind = Expr::Kind::Const;
                c.constant = double(std::int64_t(rng.below(100)) - 50) / 8.0;
                return c;
            }
            return ref();
        }
        Expr e;
        switch (rng.below(5)) {
            case 0: e.kind = Expr::Kind::Add; break;
            case 1: e.kind = Expr::Kind::Sub; break;
            case 2: e.kind = Expr::Kind::Mul; break;
            case 3: e.kind = Expr::Kind::Div; break;
            default: e.kind = Expr::Kind::Mean; break;
        }
        e.children.push_back(self(self, depth + 1));
        e.children.push_back(self(self, depth + 1));
        return e;
    };
    h.target = expr(expr, 0);
    h.agg = static_cast<Agg>(rng.below(3));
    h.op = static_cast<PredOp>(rng.below(4));
    h.constant = double(std::int64_t(rng.below(1000)) - 500) / 16.0;
    return h;
}

}  // namespace

TEST_CASE("round-trip property over generated hypotheses", "[dsl][property]") {
    Rng rng(2027);
    for (int i = 0; i < 1000; ++i) {
        Hypothesis h = random_hypothesis(rng);
        std::string printed = print_hypothesis(h);
        INFO(printed);
        Hypothesis back = parse_hypothesis(printed);
        REQUIRE(back == h);
        REQUIRE(print_hypothesis(back) == printed);
    }
}

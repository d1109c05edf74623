#include <catch2/catch_amalgamated.hpp>

#include "graphhypo/stat_test.hpp"
#include "support/fixtures.hpp"

using namespace graphhypo;

namespace {

Estimate from_values(const std::vector<double>& values, Agg agg = Agg::Avg) {
    detail::Accumulator acc(agg);
    for (double v : values) acc.add(v, 1.0);
    Estimate est;
    acc.finish(est);
    return est;
}

Hypothesis pred(PredOp op, double c) {
    Hypothesis h;
    NodeClause clause;
    clause.type_name = "t";
    h.pattern.steps.push_back(clause);
    h.op = op;
    h.constant = c;
    return h;
}

}  // namespace

TEST_CASE("textbook one-sample t-test", "[stat]") {
    // {60,61,59,60} vs c=50, one-sided '>': frozen scipy reference values
    // t = 24.49489742783178, p = 7.457860064246804e-05,
    // half CI width = t_{0.975,3} * SE = 1.2992282636253374.
    auto est = from_values({60, 61, 59, 60});
    auto r = decide(est, pred(PredOp::Gt, 50));
    CHECK(r.outcome);
    REQUIRE(r.p_value);
    CHECK_THAT(*r.p_value, Catch::Matchers::WithinRel(7.457860064246804e-05, 1e-9));
    CHECK(*r.p_value < 0.05);
    REQUIRE(r.ci_low);
    CHECK_THAT(*r.ci_low, Catch::Matchers::WithinAbs(60.0 - 1.2992282636253374, 1e-9));
    CHECK_THAT(*r.ci_high, Catch::Matchers::WithinAbs(60.0 + 1.2992282636253374, 1e-9));
    CHECK(*r.ci_low <= *r.estimate);
    CHECK(*r.estimate <= *r.ci_high);
}

TEST_CASE("two-element sample matches scipy", "[stat]") {
    // {0.2, 0.8} vs 0.4 '>': one-sided p = 0.3975836176504333.
    auto est = from_values({0.2, 0.8});
    auto r = decide(est, pred(PredOp::Gt, 0.4));
    CHECK(r.outcome);
    REQUIRE(r.p_value);
    CHECK_THAT(*r.p_value, Catch::Matchers::WithinRel(0.3975836176504333, 1e-9));
}

TEST_CASE("point decision at the boundary is strict", "[stat]") {
    auto est = from_values({50, 50, 50, 50});
    auto r = decide(est, pred(PredOp::Gt, 50));
    CHECK_FALSE(r.outcome);
    // Degenerate zero-variance sample at the boundary.
    REQUIRE(r.p_value);
    CHECK(*r.p_value == 0.5);
}

TEST_CASE("one relevant element: verdict from the point estimate, no p/CI", "[stat]") {
    auto est = from_values({7});
    auto r = decide(est, pred(PredOp::Gt, 5));
    CHECK(r.outcome);
    CHECK(r.ci_inconclusive);
    CHECK_FALSE(r.p_value);
    CHECK_FALSE(r.ci_low);
    CHECK_FALSE(r.inconclusive);
}

TEST_CASE("zero relevant elements: inconclusive, outcome false", "[stat]") {
    Estimate est;  // default: inconclusive
    auto r = decide(est, pred(PredOp::Gt, 5));
    CHECK(r.inconclusive);
    CHECK_FALSE(r.outcome);
    CHECK_FALSE(r.p_value);
}

TEST_CASE("two-sided operators", "[stat]") {
    auto est = from_values({60, 61, 59, 60});
    auto eq = decide(est, pred(PredOp::Eq, 60));
    CHECK(eq.outcome);  // point equality
    REQUIRE(eq.p_value);
    CHECK(*eq.p_value == 1.0);  // t = 0 exactly, two-sided

    auto ne = decide(est, pred(PredOp::Ne, 50));
    CHECK(ne.outcome);
    REQUIRE(ne.p_value);
    CHECK_THAT(*ne.p_value, Catch::Matchers::WithinRel(2 * 7.457860064246804e-05, 1e-9));

    auto lt = decide(est, pred(PredOp::Lt, 50));
    CHECK_FALSE(lt.outcome);
    CHECK_THAT(*lt.p_value, Catch::Matchers::WithinRel(1 - 7.457860064246804e-05, 1e-7));
}

TEST_CASE("decide is scale-consistent", "[stat][property]") {
    std::vector<double> base{3.0, 4.5, 2.5, 5.0, 3.5, 4.0};
    for (double scale : {2.0, 10.0, 0.25, 1e6}) {
        std::vector<double> scaled;
        for (double v : base) scaled.push_back(v * scale);
        auto r0 = decide(from_values(base), pred(PredOp::Gt, 3.2));
        auto r1 = decide(from_values(scaled), pred(PredOp::Gt, 3.2 * scale));
        CHECK(r0.outcome == r1.outcome);
        CHECK_THAT(*r1.p_value, Catch::Matchers::WithinRel(*r0.p_value, 1e-9));
    }
}

TEST_CASE("CI width shrinks with sample size", "[stat][property]") {
    Rng rng(77);
    double widths[2];
    for (int which : {0, 1}) {
        std::size_t n = which == 0 ? 40 : 160;  // 4x more samples
        std::vector<double> median_width;
        for (int run = 0; run < 30; ++run) {
            std::vector<double> xs;
            for (std::size_t i = 0; i < n; ++i) xs.push_back(10 + 2 * rng.normal());
            auto r = decide(from_values(xs), pred(PredOp::Gt, 9));
            median_width.push_back(*r.ci_high - *r.ci_low);
        }
        std::nth_element(median_width.begin(), median_width.begin() + 15,
                         median_width.end());
        widths[which] = median_width[15];
    }
    CHECK(widths[1] <= widths[0]);
}

TEST_CASE("extremum aggregates report no p-value or CI", "[stat]") {
    auto est = from_values({5, 2, 9}, Agg::Min);
    REQUIRE(est.value);
    CHECK(*est.value == 2.0);
    auto r = decide(est, pred(PredOp::Gt, 1));
    CHECK(r.outcome);
    CHECK(r.ci_inconclusive);
    CHECK_FALSE(r.p_value);
}

TEST_CASE("weighted accumulator: effective sample size and corrected variance", "[stat]") {
    // values 1,2,3 with weights .5,.25,.25: mean 1.75, n_eff 8/3, corrected
    // variance 1.1 (hand-checked against numpy).
    detail::Accumulator acc(Agg::Avg);
    acc.add(1.0, 0.5);
    acc.add(2.0, 0.25);
    acc.add(3.0, 0.25);
    Estimate est;
    acc.finish(est);
    REQUIRE(est.value);
    CHECK_THAT(*est.value, Catch::Matchers::WithinRel(1.75, 1e-12));
    CHECK_THAT(est.n_eff, Catch::Matchers::WithinRel(8.0 / 3.0, 1e-12));
    CHECK_THAT(est.variance, Catch::Matchers::WithinRel(1.1, 1e-9));
}

TEST_CASE("accuracy counts matches; inconclusive is always a mismatch", "[stat]") {
    std::vector<TestResult> rs(30);
    for (int i = 0; i < 30; ++i) {
        rs[i].outcome = i < 27;  // 27 true verdicts
        rs[i].inconclusive = false;
    }
    auto rep = accuracy(true, rs);
    CHECK(rep.k == 30);
    CHECK(rep.matches == 27);
    CHECK_THAT(rep.accuracy, Catch::Matchers::WithinRel(0.9, 1e-12));

    for (auto& r : rs) r.outcome = true;
    CHECK(accuracy(true, rs).accuracy == 1.0);

    // Inconclusive never matches, even when the stored outcome agrees.
    for (auto& r : rs) {
        r.outcome = false;
        r.inconclusive = true;
    }
    CHECK(accuracy(false, rs).accuracy == 0.0);
}

TEST_CASE("sign test p-values", "[stat]") {
    // 20 wins of 30 fair trials: P(Bin(30,.5) >= 20) ≈ 0.049369.
    CHECK_THAT(sign_test_pvalue(20, 30), Catch::Matchers::WithinRel(0.049368572607636452, 1e-9));
    CHECK(sign_test_pvalue(30, 30) < 1e-8);
    CHECK_THAT(sign_test_pvalue(0, 30), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

#include <doctest.h>

#include <cmath>

#include <fragile_bandits/checks.hpp>
#include <fragile_bandits/generators.hpp>
#include <fragile_bandits/suites.hpp>

using namespace fragile_bandits;

TEST_CASE("lemma_marginals: degenerate and hand-checked cases") {
    DiscreteJoint one;
    one.atoms.push_back({{1.0}, {1.0}, 1.0});  // U = V = e1 in d = 1
    InequalityCheck r = lemma_marginals_check(one);
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(r.rhs == doctest::Approx(1.0));
    CHECK(r.holds);

    DiscreteJoint empty;
    CHECK(lemma_marginals_check(empty).holds);

    // anti-correlated pair in d = 2
    DiscreteJoint two;
    two.atoms.push_back({{1.0, 0.0}, {0.0, 1.0}, 0.5});
    two.atoms.push_back({{0.0, 1.0}, {1.0, 0.0}, 0.5});
    InequalityCheck t = lemma_marginals_check(two);
    CHECK(t.lhs == doctest::Approx(0.0));
    CHECK(t.holds);
}

TEST_CASE("lemma_gbb frozen oracle: f = z^2 on uniform {1,2,3}") {
    MonotoneRatioFn fn;
    fn.f = [](double z) { return z * z; };
    fn.name = "square";
    ScalarDist u = {{1.0, 1.0 / 3.0}, {2.0, 1.0 / 3.0}, {3.0, 1.0 / 3.0}};
    InequalityCheck r = lemma_gbb_check(fn, u);
    CHECK(r.lhs == doctest::Approx(49.0 / 9.0).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(49.0 / 3.0).epsilon(1e-12));
    CHECK(r.holds);
}

TEST_CASE("lemma_gbb verifies its preconditions") {
    ScalarDist u = {{1.0, 0.5}, {4.0, 0.5}};
    MonotoneRatioFn affine;
    affine.f = [](double z) { return z + 1.0; };  // f(0) != 0
    affine.name = "affine";
    CHECK_THROWS_AS(lemma_gbb_check(affine, u), PreconditionFailed);

    MonotoneRatioFn root;
    root.f = [](double z) { return std::sqrt(z); };  // ratio decreases
    root.name = "sqrt";
    CHECK_THROWS_AS(lemma_gbb_check(root, u), PreconditionFailed);

    MonotoneRatioFn neg;
    neg.f = [](double z) { return z; };
    neg.name = "id";
    ScalarDist bad = {{-1.0, 1.0}};
    CHECK_THROWS_AS(lemma_gbb_check(neg, bad), PreconditionFailed);

    // degenerate point mass: vacuously true
    ScalarDist point = {{2.0, 1.0}};
    CHECK(lemma_gbb_check(neg, point).holds);
}

TEST_CASE("regular simplex: unit vectors with pairwise products -1/d") {
    for (size_t d = 1; d <= 8; ++d) {
        auto vs = regular_simplex_vertices(d);
        REQUIRE(vs.size() == d + 1);
        for (size_t i = 0; i < vs.size(); ++i) {
            CHECK(norm(vs[i]) == doctest::Approx(1.0).epsilon(1e-10));
            for (size_t j = i + 1; j < vs.size(); ++j)
                CHECK(dot(vs[i], vs[j]) ==
                      doctest::Approx(-1.0 / static_cast<double>(d)).epsilon(1e-10));
        }
    }
}

TEST_CASE("pairwise-negative capacity equals d+1") {
    for (size_t d = 1; d <= 5; ++d)
        CHECK(pairwise_negative_capacity(d, 2000, 17 + d) == d + 1);
}

TEST_CASE("no_sublinear_verify rechecks its premises") {
    Instance soft = gen_sphere_matched(3, 8, 9);  // optimal reward ~0.73 << 1 - 1/8
    std::vector<Policy> ts = {{PolicyKind::thompson}};
    CHECK_THROWS_AS(no_sublinear_verify(soft, ts, 3, 10, 1), PreconditionFailed);

    ExpFamilyResult fam = gen_exponential_family(12, 0.5, 4, 10);
    REQUIRE(fam.target_reached);
    Instance hard = fam.instance;
    hard.beta = calibrate_hard_beta(hard, hard.size());
    CHECK_THROWS_AS(no_sublinear_verify(hard, ts, 5, 10, 1), PreconditionFailed);  // t_max
    Instance skewed = hard;
    skewed.prior[0] += 0.1;
    skewed.prior[1] -= 0.1;
    CHECK_THROWS_AS(no_sublinear_verify(skewed, ts, 3, 10, 1), PreconditionFailed);
}

TEST_CASE("linear-regret floor on a small calibrated hard instance") {
    ExpFamilyResult fam = gen_exponential_family(12, 0.5, 4, 10);
    REQUIRE(fam.target_reached);
    Instance hard = fam.instance;
    hard.beta = calibrate_hard_beta(hard, hard.size());
    std::vector<Policy> policies = {{PolicyKind::thompson},
                                    {PolicyKind::greedy_map},
                                    {PolicyKind::uniform_random}};
    auto rows = no_sublinear_verify(hard, policies, 4, 800, 12);
    REQUIRE(rows.size() == 12);  // 3 policies x 4 stages
    for (const auto& row : rows) {
        CAPTURE(row.policy);
        CAPTURE(row.t);
        CHECK(row.floor == doctest::Approx(static_cast<double>(row.t) / 4.0));
        CHECK(row.holds);
    }
    // uniform policy's per-step regret is near (1 - 2/N) in expectation
    for (const auto& row : rows)
        if (row.policy == "uniform_random" && row.t == 1)
            CHECK(row.mean_regret ==
                  doctest::Approx(0.9 * (1.0 - 0.1 - 0.1)).epsilon(0.25));
}

TEST_CASE("verification suites run green at reduced scale") {
    CHECK(suite_lemma_marginals(300, 5).green());
    CHECK(suite_lemma_gbb(300, 5).green());
    CHECK(suite_capacity(1500, 5).green());
    CHECK(suite_turan(300, 5).green());
    Prop6Params p;
    p.d = 12;
    p.iota = 0.5;
    p.n = 10;
    p.t_max = 4;
    p.runs = 400;
    CHECK(suite_prop6(p, 5).green());
}

TEST_CASE("suite reports serialize with counts") {
    SuiteReport rep = suite_capacity(800, 6);
    Json j = suite_report_json(rep);
    CHECK(j["suite"] == "capacity");
    CHECK(j["cases"] == 8);
    CHECK(j["failures"] == rep.failures);
}

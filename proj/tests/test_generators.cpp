#include <doctest.h>

#include <cmath>

#include <fragile_bandits/fragility.hpp>
#include <fragile_bandits/generators.hpp>

using namespace fragile_bandits;

TEST_CASE("sphere instances: unit norms, identity map, lambda = 1") {
    Instance inst = gen_sphere_matched(3, 16, 7);
    CHECK(validate_instance(inst).empty());
    CHECK(inst.actions == inst.parameters);
    for (const Vec& v : inst.actions) CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-12));
    for (size_t i = 0; i < inst.size(); ++i) CHECK(inst.optimal_map[i] == i);
    CHECK(lambda_of(inst) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sphere generation is deterministic in the seed") {
    Instance a = gen_sphere_matched(4, 10, 99);
    Instance b = gen_sphere_matched(4, 10, 99);
    CHECK(a.actions == b.actions);
    Instance c = gen_sphere_matched(4, 10, 100);
    CHECK(a.actions != c.actions);
}

TEST_CASE("cone construction: geometry and admissible range") {
    size_t n = 10;
    double h = 0.6;
    double lo = detail::cone_gamma_lower(n, h);
    CHECK(lo < 1.0);
    Instance inst = gen_cone_iota0(n, h, 0.5 * (lo + 1.0));
    CHECK(inst.d == 3);
    CHECK(validate_instance(inst).empty());
    for (const Vec& v : inst.actions) CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-12));
    for (const Vec& v : inst.parameters)
        CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lambda_of(inst) > 0.0);
    CHECK(fragility_dimension(inst).size == n);

    CHECK_THROWS_AS(gen_cone_iota0(2, h, 0.9), DomainError);
    CHECK_THROWS_AS(gen_cone_iota0(n, 1.5, 0.9), DomainError);
    CHECK_THROWS_AS(gen_cone_iota0(n, h, lo * 0.5), DomainError);
    CHECK_THROWS_AS(gen_cone_iota0(n, h, 1.0), DomainError);
}

TEST_CASE("cone worst-case log-odds shrinks as gamma_factor -> 1") {
    size_t n = 8;
    double h = 0.5;
    double lo = detail::cone_gamma_lower(n, h);
    double lam_mid = lambda_of(gen_cone_iota0(n, h, 0.5 * (lo + 1.0)));
    double lam_near1 = lambda_of(gen_cone_iota0(n, h, 0.999 + 0.001 * lo));
    CHECK(lam_near1 < lam_mid);
    CHECK(lam_near1 > 0.0);
    CHECK(lam_near1 < 0.01);  // iota -> 0 regime
}

TEST_CASE("packing respects the pairwise threshold") {
    PackingConfig pc;
    pc.d = 4;
    pc.epsilon = 0.5;
    pc.target_count = 10;
    PackingResult r = gen_packing(pc, 3);
    CHECK(r.target_reached);
    for (size_t i = 0; i < r.vectors.size(); ++i) {
        CHECK(norm(r.vectors[i]) == doctest::Approx(1.0).epsilon(1e-12));
        for (size_t j = i + 1; j < r.vectors.size(); ++j)
            CHECK(dot(r.vectors[i], r.vectors[j]) < pc.epsilon);
    }

    // an impossible request reports target_reached = false instead of looping
    PackingConfig hard;
    hard.d = 2;
    hard.epsilon = 0.05;
    hard.target_count = 50;
    hard.max_attempts = 5000;
    PackingResult h = gen_packing(hard, 3);
    CHECK_FALSE(h.target_reached);
    CHECK(h.attempts_used == 5000);

    PackingConfig bad;
    bad.epsilon = 1.5;
    CHECK_THROWS_AS(gen_packing(bad, 1), DomainError);
}

TEST_CASE("lifted family: matched log-odds iota, negative cross log-odds") {
    double iota = 0.4;
    ExpFamilyResult r = gen_exponential_family(6, iota, 2, 8);
    REQUIRE(r.target_reached);
    const Instance& inst = r.instance;
    CHECK(validate_instance(inst).empty());
    for (size_t i = 0; i < inst.size(); ++i) {
        CHECK(dot(inst.actions[i], inst.parameters[i]) ==
              doctest::Approx(iota).epsilon(1e-12));
        for (size_t j = 0; j < inst.size(); ++j)
            if (i != j) CHECK(dot(inst.actions[i], inst.parameters[j]) < 0.0);
    }
    CHECK(lambda_of(inst) == doctest::Approx(iota).epsilon(1e-12));
    CHECK(fragility_dimension(inst).size == inst.size());

    CHECK_THROWS_AS(gen_exponential_family(6, 0.0, 1, 4), DomainError);
    CHECK_THROWS_AS(gen_exponential_family(2, 0.4, 1, 4), DomainError);
}

TEST_CASE("high dimension admits the 20-point code at iota = 0.5") {
    ExpFamilyResult r = gen_exponential_family(30, 0.5, 11, 20);
    CHECK(r.target_reached);
    CHECK(r.instance.size() == 20);
}

TEST_CASE("beta calibration matches the closed form ln(N-1)/min(lambda,-m)") {
    ExpFamilyResult fam = gen_exponential_family(12, 0.5, 5, 10);
    REQUIRE(fam.target_reached);
    Instance inst = fam.instance;
    size_t n = inst.size();
    double lambda = lambda_of(inst);
    double m = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (j != inst.optimal_map[i])
                m = std::max(m, dot(inst.actions[j], inst.parameters[i]));
    double expected = std::log(static_cast<double>(n) - 1.0) / std::min(lambda, -m);
    double beta = calibrate_hard_beta(inst, n);
    CHECK(beta == doctest::Approx(expected).epsilon(1e-4));

    // premises hold at the calibrated slope
    inst.beta = beta;
    double inv_n = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
        CHECK(phi(beta, dot(inst.actions[inst.optimal_map[i]], inst.parameters[i])) >=
              1.0 - inv_n - 1e-9);
        for (size_t j = 0; j < n; ++j)
            if (j != inst.optimal_map[i])
                CHECK(phi(beta, dot(inst.actions[j], inst.parameters[i])) <= inv_n + 1e-9);
    }
}

TEST_CASE("calibration refuses instances without the sign structure") {
    Instance inst = gen_sphere_matched(3, 6, 8);  // cross log-odds not all negative
    CHECK_THROWS_AS(calibrate_hard_beta(inst, 6), Infeasible);
}

TEST_CASE("non-monotone pair: superset of actions collapses fragility") {
    size_t n = 12;
    double lo = detail::cone_gamma_lower(n, 0.6);
    NonMonotonePair pair = gen_nonmonotone_pair(n, 0.6, 0.5 * (lo + 1.0));
    CHECK(validate_instance(pair.easy).empty());
    CHECK(validate_instance(pair.hard).empty());
    CHECK(pair.easy.actions.size() == 2 * n);
    CHECK(pair.easy.parameters == pair.hard.parameters);
    for (size_t i = 0; i < n; ++i) CHECK(pair.easy.optimal_map[i] == n + i);

    size_t eta_easy = fragility_dimension(pair.easy).size;
    size_t eta_hard = fragility_dimension(pair.hard).size;
    CHECK(eta_easy <= 4);  // d + 1 in d = 3
    CHECK(eta_hard == n);
    CHECK(eta_easy < eta_hard);
}

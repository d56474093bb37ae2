#include <doctest.h>

#include <fragile_bandits/generators.hpp>
#include <fragile_bandits/geometry.hpp>

using namespace fragile_bandits;

namespace {

Instance two_by_two() {
    // a1=(1,0), a2=(0,1); theta1=(0.5,-0.6) -> a1, theta2=(-0.6,-0.3) -> a2
    Instance inst;
    inst.d = 2;
    inst.beta = 1.0;
    inst.actions = {{1.0, 0.0}, {0.0, 1.0}};
    inst.parameters = {{0.5, -0.6}, {-0.6, -0.3}};
    inst.prior = uniform_prior(2);
    inst.optimal_map = derive_optimal_map(inst.actions, inst.parameters);
    return inst;
}

}  // namespace

TEST_CASE("dot and norm basics") {
    CHECK(dot({1.0, 2.0, 3.0}, {4.0, -5.0, 6.0}) == doctest::Approx(12.0));
    CHECK(norm({3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(in_unit_ball({0.6, 0.8}));
    CHECK_FALSE(in_unit_ball({0.8, 0.8}));
    CHECK_FALSE(in_unit_ball({std::nan(""), 0.0}));
}

TEST_CASE("derive_optimal_map on the explicit 2x2 example") {
    Instance inst = two_by_two();
    CHECK(inst.optimal_map == std::vector<size_t>{0, 1});
    CHECK(lambda_of(inst) == doctest::Approx(-0.3));   // min(0.5, -0.3)
    CHECK(delta_of(inst) == doctest::Approx(0.3));     // min(|0.5|, |-0.3|)
    CHECK(validate_instance(inst).empty());
}

TEST_CASE("derive_optimal_map throws AmbiguousOptimum on a genuine tie") {
    std::vector<Vec> actions = {{1.0, 0.0}, {0.0, 1.0}};
    std::vector<Vec> params = {{0.5, 0.5}};
    CHECK_THROWS_AS(derive_optimal_map(actions, params), AmbiguousOptimum);
}

TEST_CASE("nearly-parallel actions with gap above the tolerance are unambiguous") {
    // gap ~1e-4 >> kTieTolerance, so this pair is valid, not ambiguous
    std::vector<Vec> pts = {{1.0, 0.0}, {0.9999, 0.0141}};
    auto map = derive_optimal_map(pts, pts);
    CHECK(map == std::vector<size_t>{0, 1});
    Instance inst;
    inst.d = 2;
    inst.beta = 1.0;
    inst.actions = pts;
    inst.parameters = pts;
    inst.prior = uniform_prior(2);
    inst.optimal_map = map;
    CHECK(validate_instance(inst).empty());
}

TEST_CASE("derive_optimal_map throws NonBijective when an action repeats") {
    std::vector<Vec> actions = {{1.0, 0.0}};
    std::vector<Vec> params = {{1.0, 0.0}, {0.9, 0.0}};
    CHECK_THROWS_AS(derive_optimal_map(actions, params), NonBijective);
}

TEST_CASE("validate_instance reports violations") {
    Instance inst = two_by_two();

    SUBCASE("prior must sum to one") {
        inst.prior = {0.5, 0.6};
        auto v = validate_instance(inst);
        CHECK_FALSE(v.empty());
    }
    SUBCASE("prior must be nonnegative") {
        inst.prior = {1.5, -0.5};
        CHECK_FALSE(validate_instance(inst).empty());
    }
    SUBCASE("vectors must live in the unit ball") {
        inst.parameters[0] = {1.5, 0.0};
        CHECK_FALSE(validate_instance(inst).empty());
    }
    SUBCASE("beta must be positive") {
        inst.beta = 0.0;
        CHECK_FALSE(validate_instance(inst).empty());
    }
    SUBCASE("optimal_map must be injective") {
        inst.optimal_map = {0, 0};
        CHECK_FALSE(validate_instance(inst).empty());
    }
    SUBCASE("optimal_map must point at the argmax") {
        inst.optimal_map = {1, 0};
        CHECK_FALSE(validate_instance(inst).empty());
    }
    SUBCASE("wrong dimension is caught") {
        inst.actions[0] = {1.0};
        CHECK_FALSE(validate_instance(inst).empty());
    }
    SUBCASE("index out of range is caught") {
        inst.optimal_map = {0, 7};
        CHECK_FALSE(validate_instance(inst).empty());
    }
}

TEST_CASE("more actions than parameters is valid with an injective map") {
    Instance inst = two_by_two();
    inst.actions.push_back({0.6, 0.5});  // dominated extra action
    CHECK(validate_instance(inst).empty());
}

TEST_CASE("uniform_prior sums to one") {
    for (size_t n : {1, 2, 7, 100}) {
        auto p = uniform_prior(n);
        double s = 0.0;
        for (double x : p) s += x;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("round trip: derive_optimal_map output always validates") {
    CounterRng rng = CounterRng::derive(42, 0);
    for (int c = 0; c < 50; ++c) {
        size_t d = 2 + rng.below(4);
        size_t n = 2 + rng.below(9);
        Instance inst = gen_sphere_matched(d, n, rng.next_u64());
        CHECK(validate_instance(inst).empty());
    }
}

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fragile_bandits/errors.hpp"
#include "fragile_bandits/geometry.hpp"
#include "fragile_bandits/logistic.hpp"
#include "fragile_bandits/rng.hpp"

namespace fragile_bandits {

inline Vec random_unit_vector(size_t d, CounterRng& rng) {
    Vec v(d);
    for (;;) {
        double n2 = 0.0;
        for (size_t i = 0; i < d; ++i) {
            v[i] = rng.normal();
            n2 += v[i] * v[i];
        }
        if (n2 > 1e-24) {
            double inv = 1.0 / std::sqrt(n2);
            for (double& x : v) x *= inv;
            return v;
        }
    }
}

/// Matched sphere instance: A = Theta, N uniform points on S_{d-1},
/// uniform prior, identity optimal map (resampled on argmax ties).
inline Instance gen_sphere_matched(size_t d, size_t n, uint64_t seed, double beta = 1.0) {
    CounterRng rng = CounterRng::derive(seed, 0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Vec> pts;
        pts.reserve(n);
        for (size_t i = 0; i < n; ++i) pts.push_back(random_unit_vector(d, rng));
        Instance inst;
        inst.d = d;
        inst.beta = beta;
        inst.actions = pts;
        inst.parameters = pts;
        inst.prior = uniform_prior(n);
        try {
            inst.optimal_map = derive_optimal_map(inst.actions, inst.parameters);
        } catch (const AmbiguousOptimum&) {
            continue;
        } catch (const NonBijective&) {
            continue;
        }
        return inst;
    }
    throw GenerationFailed("gen_sphere_matched: retry cap exhausted");
}

namespace detail {

/// Ring points of the arbitrarily-fragile cone construction: actions on an
/// upper ring of radius r, parameters on a lower ring of radius h.
inline void cone_rings(size_t n, double h, double r, std::vector<Vec>& xs,
                       std::vector<Vec>& ys) {
    const double two_pi = 6.283185307179586476925286766559;
    double zx = std::sqrt(std::max(0.0, 1.0 - r * r));
    double zy = -std::sqrt(std::max(0.0, 1.0 - h * h));
    xs.clear();
    ys.clear();
    for (size_t i = 0; i < n; ++i) {
        double a = two_pi * static_cast<double>(i + 1) / static_cast<double>(n);
        xs.push_back({r * std::cos(a), r * std::sin(a), zx});
        ys.push_back({h * std::cos(a), h * std::sin(a), zy});
    }
}

inline double cone_gamma_lower(size_t n, double h) {
    const double two_pi = 6.283185307179586476925286766559;
    double c = std::cos(two_pi / static_cast<double>(n));
    double s = std::sin(two_pi / static_cast<double>(n));
    return c * c / (1.0 - s * s * h * h);
}

}  // namespace detail

/// d = 3 construction whose fragility dimension equals N while the
/// worst-case optimal log-odds can be made arbitrarily close to zero.
/// gamma_factor must lie strictly inside the admissible interval
/// (cos^2(2pi/N) / (1 - sin^2(2pi/N) h^2), 1); r = sqrt(1 - gamma h^2).
inline Instance gen_cone_iota0(size_t n, double h, double gamma_factor, double beta = 1.0) {
    if (n < 3) throw DomainError("gen_cone_iota0: N must be >= 3");
    if (!(h > 0.0 && h < 1.0)) throw DomainError("gen_cone_iota0: h must be in (0, 1)");
    double lo = detail::cone_gamma_lower(n, h);
    if (!(gamma_factor > lo && gamma_factor < 1.0))
        throw DomainError("gen_cone_iota0: gamma_factor must be in (" +
                          std::to_string(lo) + ", 1)");
    double r = std::sqrt(1.0 - gamma_factor * h * h);
    Instance inst;
    inst.d = 3;
    inst.beta = beta;
    detail::cone_rings(n, h, r, inst.actions, inst.parameters);
    inst.prior = uniform_prior(n);
    inst.optimal_map = derive_optimal_map(inst.actions, inst.parameters);
    return inst;
}

struct PackingConfig {
    size_t d = 3;
    double epsilon = 0.5;
    size_t target_count = 8;
    size_t max_attempts = 100000;
};

struct PackingResult {
    std::vector<Vec> vectors;
    bool target_reached = false;
    size_t attempts_used = 0;
};

/// Greedy rejection sampling of a spherical code: uniform draws on S_{d-1},
/// kept while all pairwise inner products stay strictly below epsilon.
inline PackingResult gen_packing(const PackingConfig& config, uint64_t seed) {
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0) && config.epsilon != 0.0)
        throw DomainError("gen_packing: epsilon must be in [0, 1)");
    if (config.target_count < 1) throw DomainError("gen_packing: target_count must be >= 1");
    CounterRng rng = CounterRng::derive(seed, 0);
    PackingResult res;
    while (res.vectors.size() < config.target_count &&
           res.attempts_used < config.max_attempts) {
        ++res.attempts_used;
        Vec v = random_unit_vector(config.d, rng);
        bool ok = true;
        for (const Vec& u : res.vectors)
            if (dot(u, v) >= config.epsilon) {
                ok = false;
                break;
            }
        if (ok) res.vectors.push_back(std::move(v));
    }
    if (res.vectors.empty()) res.vectors.push_back(random_unit_vector(config.d, rng));
    res.target_reached = res.vectors.size() >= config.target_count;
    // hard assertion on output: no pair may violate the bound
    for (size_t i = 0; i < res.vectors.size(); ++i)
        for (size_t j = i + 1; j < res.vectors.size(); ++j)
            if (dot(res.vectors[i], res.vectors[j]) >= config.epsilon)
                throw GenerationFailed("gen_packing: pairwise bound violated on output");
    return res;
}

struct ExpFamilyResult {
    Instance instance;
    bool target_reached = false;
    size_t achieved = 0;
};

/// Exponential-capacity family: a spherical code in S_{d-2} with
/// epsilon = (1-iota)/(1+iota), lifted by u = v = arccos(-iota)/2 so that
/// every matched pair has log-odds iota and every cross pair is negative.
inline ExpFamilyResult gen_exponential_family(size_t d, double iota, uint64_t seed,
                                              size_t target_count, double beta = 1.0,
                                              size_t max_attempts = 200000) {
    if (!(iota > 0.0 && iota < 1.0))
        throw DomainError("gen_exponential_family: iota must be in (0, 1)");
    if (d < 3) throw DomainError("gen_exponential_family: d must be >= 3");
    double u = 0.5 * std::acos(-iota);
    double eps = (1.0 - iota) / (1.0 + iota);
    PackingConfig pc;
    pc.d = d - 1;
    pc.epsilon = eps;
    pc.target_count = target_count;
    pc.max_attempts = max_attempts;
    PackingResult pack = gen_packing(pc, seed);

    ExpFamilyResult res;
    res.target_reached = pack.target_reached;
    res.achieved = pack.vectors.size();
    Instance& inst = res.instance;
    inst.d = d;
    inst.beta = beta;
    double cu = std::cos(u), su = std::sin(u);
    for (const Vec& z : pack.vectors) {
        Vec x(d), y(d);
        x[0] = cu;
        y[0] = -cu;
        for (size_t i = 0; i < d - 1; ++i) {
            x[i + 1] = su * z[i];
            y[i + 1] = su * z[i];
        }
        inst.actions.push_back(std::move(x));
        inst.parameters.push_back(std::move(y));
    }
    inst.prior = uniform_prior(inst.parameters.size());
    inst.optimal_map = derive_optimal_map(inst.actions, inst.parameters);
    // every cross log-odds must be negative
    for (size_t i = 0; i < inst.size(); ++i)
        for (size_t j = 0; j < inst.size(); ++j)
            if (i != j && dot(inst.actions[i], inst.parameters[j]) >= 0.0)
                throw GenerationFailed("gen_exponential_family: nonnegative cross log-odds");
    return res;
}

/// Smallest beta making the hard instance's premises hold:
///   phi_beta(lambda) >= 1 - 1/N  and  phi_beta(m) <= 1/N
/// with m the largest (least negative) cross log-odds.  Bisection to 1e-6.
inline double calibrate_hard_beta(const Instance& inst, size_t n) {
    double lambda = lambda_of(inst);
    double m = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < inst.size(); ++i)
        for (size_t j = 0; j < inst.actions.size(); ++j) {
            if (j == inst.optimal_map[i]) continue;
            m = std::max(m, dot(inst.actions[j], inst.parameters[i]));
        }
    if (!(lambda > 0.0) || !(m < 0.0))
        throw Infeasible("calibrate_hard_beta: needs positive optimal and negative cross "
                         "log-odds");
    const double target = 1.0 - 1.0 / static_cast<double>(n);
    auto feasible = [&](double beta) {
        return phi(beta, lambda) >= target && phi(beta, m) <= 1.0 - target;
    };
    double hi = 1.0;
    while (!feasible(hi)) {
        hi *= 2.0;
        if (hi > 1e12) throw Infeasible("calibrate_hard_beta: no feasible beta found");
    }
    double lo = 0.0;
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

struct NonMonotonePair {
    Instance easy;  ///< actions X union Y; every parameter self-optimal
    Instance hard;  ///< actions X only; complete fragility graph
};

/// Appendix-style pair on shared parameters Y: adding the Y vectors to the
/// action set collapses the fragility dimension from N to at most d+1.
inline NonMonotonePair gen_nonmonotone_pair(size_t n, double h, double gamma_factor,
                                            double beta = 1.0) {
    NonMonotonePair pair;
    pair.hard = gen_cone_iota0(n, h, gamma_factor, beta);
    Instance& easy = pair.easy;
    easy.d = 3;
    easy.beta = beta;
    easy.actions = pair.hard.actions;  // X first ...
    for (const Vec& y : pair.hard.parameters) easy.actions.push_back(y);  // ... then Y
    easy.parameters = pair.hard.parameters;
    easy.prior = uniform_prior(n);
    easy.optimal_map = derive_optimal_map(easy.actions, easy.parameters);
    for (size_t i = 0; i < n; ++i)
        if (easy.optimal_map[i] != n + i)
            throw GenerationFailed("gen_nonmonotone_pair: parameter not self-optimal");
    return pair;
}

}  // namespace fragile_bandits

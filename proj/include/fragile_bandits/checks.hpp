#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fragile_bandits/engine.hpp"
#include "fragile_bandits/errors.hpp"
#include "fragile_bandits/geometry.hpp"
#include "fragile_bandits/rng.hpp"

namespace fragile_bandits {

/// Finite joint distribution over vector pairs (U, V).
struct DiscreteJoint {
    struct Atom {
        Vec u;
        Vec v;
        double prob;
    };
    std::vector<Atom> atoms;
};

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// E[|U^T V|]^2 <= d E[(R^T S)^2] with R, S independent copies of the
/// marginals.  Exact enumeration over the joint's atoms.
inline InequalityCheck lemma_marginals_check(const DiscreteJoint& joint) {
    InequalityCheck r;
    if (joint.atoms.empty()) {
        r.holds = true;
        return r;
    }
    const double d = static_cast<double>(joint.atoms.front().u.size());
    double lhs_e = 0.0;
    for (const auto& a : joint.atoms) lhs_e += a.prob * std::abs(dot(a.u, a.v));
    r.lhs = lhs_e * lhs_e;
    double rhs_e = 0.0;
    for (const auto& a : joint.atoms)
        for (const auto& b : joint.atoms) {
            double x = dot(a.u, b.v);
            rhs_e += a.prob * b.prob * x * x;
        }
    r.rhs = d * rhs_e;
    r.holds = r.lhs <= r.rhs + 1e-10;
    return r;
}

/// A scalar test function with f(0) = 0 and f(z)/z non-decreasing.
struct MonotoneRatioFn {
    std::function<double(double)> f;
    std::string name;
};

/// Discrete nonnegative distribution as (value, probability) pairs.
using ScalarDist = std::vector<std::pair<double, double>>;

/// E[f(U)]^2 / E[U]^2 <= Var[f(U)] / Var[U]; the ratio-monotonicity
/// precondition is verified on the support points before evaluating.
inline InequalityCheck lemma_gbb_check(const MonotoneRatioFn& fn, const ScalarDist& u_dist) {
    if (std::abs(fn.f(0.0)) > 1e-12)
        throw PreconditionFailed("lemma_gbb_check: f(0) != 0");
    std::vector<double> support;
    for (const auto& [v, p] : u_dist) {
        if (v < 0.0) throw PreconditionFailed("lemma_gbb_check: negative support point");
        if (p > 0.0 && v > 0.0) support.push_back(v);
    }
    std::sort(support.begin(), support.end());
    for (size_t i = 0; i + 1 < support.size(); ++i) {
        double r0 = fn.f(support[i]) / support[i];
        double r1 = fn.f(support[i + 1]) / support[i + 1];
        if (r1 < r0 - 1e-10)
            throw PreconditionFailed("lemma_gbb_check: f(z)/z decreases on support (" +
                                     fn.name + ")");
    }
    double eu = 0.0, ef = 0.0;
    for (const auto& [v, p] : u_dist) {
        eu += p * v;
        ef += p * fn.f(v);
    }
    // centered second pass: E[X^2] - E[X]^2 cancels catastrophically when the
    // support points are nearly equal, which poisons the var_f/var_u ratio
    double var_u = 0.0, var_f = 0.0;
    for (const auto& [v, p] : u_dist) {
        double dv = v - eu, df = fn.f(v) - ef;
        var_u += p * dv * dv;
        var_f += p * df * df;
    }
    InequalityCheck r;
    if (var_u <= 1e-15 || eu * eu <= 1e-300) {
        r.holds = true;  // degenerate: vacuously true
        return r;
    }
    r.lhs = ef * ef / (eu * eu);
    r.rhs = var_f / var_u;
    r.holds = r.lhs <= r.rhs + 1e-10;
    return r;
}

/// Vertices of the regular d-simplex centered at the origin: d+1 unit
/// vectors in R^d with pairwise inner products -1/d.  Built by Cholesky
/// factorization of the target Gram matrix (rank d, last pivot zero).
inline std::vector<Vec> regular_simplex_vertices(size_t d) {
    const size_t n = d + 1;
    std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
    auto gram = [&](size_t i, size_t j) { return i == j ? 1.0 : -1.0 / static_cast<double>(d); };
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            double s = gram(i, j);
            for (size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                l[i][j] = std::sqrt(std::max(0.0, s));
            } else {
                l[i][j] = l[j][j] > 1e-12 ? s / l[j][j] : 0.0;
            }
        }
    }
    std::vector<Vec> out(n, Vec(d));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < d; ++j) out[i][j] = l[i][j];
    return out;
}

/// Best-effort search for the largest pairwise-negative set in B_d.
/// Combines greedy accumulation over random draws with a local repulsion
/// descent that tries to push d+2 points apart (it never succeeds, which
/// is the point of the d+1 capacity lemma).
inline size_t pairwise_negative_capacity(size_t d, size_t attempts, uint64_t seed) {
    auto pairwise_negative = [](const std::vector<Vec>& vs) {
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j)
                if (dot(vs[i], vs[j]) >= 0.0) return false;
        return true;
    };

    // the explicit simplex must pass
    std::vector<Vec> simplex = regular_simplex_vertices(d);
    if (!pairwise_negative(simplex))
        throw GenerationFailed("pairwise_negative_capacity: simplex construction failed");
    size_t best = simplex.size();

    CounterRng rng = CounterRng::derive(seed, 0);
    size_t greedy_attempts = attempts / 2;
    {
        std::vector<Vec> kept;
        for (size_t a = 0; a < greedy_attempts; ++a) {
            Vec v(d);
            for (size_t i = 0; i < d; ++i) v[i] = rng.normal();
            double nm = norm(v);
            if (nm < 1e-12) continue;
            for (double& x : v) x /= nm;
            bool ok = true;
            for (const Vec& u : kept)
                if (dot(u, v) >= 0.0) {
                    ok = false;
                    break;
                }
            if (ok) kept.push_back(v);
            if (kept.size() > best) best = kept.size();
            if (a % 1000 == 999) kept.clear();  // restart
        }
    }
    // repulsion descent on d+2 points
    size_t descents = std::max<size_t>(1, (attempts - greedy_attempts) / 200);
    for (size_t trial = 0; trial < descents; ++trial) {
        std::vector<Vec> pts;
        for (size_t i = 0; i < d + 2; ++i) {
            Vec v(d);
            for (size_t j = 0; j < d; ++j) v[j] = rng.normal();
            double nm = norm(v);
            if (nm < 1e-12) {
                v[0] = 1.0;
                nm = 1.0;
            }
            for (double& x : v) x /= nm;
            pts.push_back(v);
        }
        for (int it = 0; it < 200; ++it) {
            for (size_t i = 0; i < pts.size(); ++i) {
                Vec push(d, 0.0);
                for (size_t j = 0; j < pts.size(); ++j) {
                    if (j == i) continue;
                    double c = dot(pts[i], pts[j]);
                    if (c >= -1e-6)
                        for (size_t k = 0; k < d; ++k) push[k] += (c + 1e-3) * pts[j][k];
                }
                for (size_t k = 0; k < d; ++k) pts[i][k] -= 0.2 * push[k];
                double nm = norm(pts[i]);
                if (nm > 1e-12)
                    for (double& x : pts[i]) x /= nm;
            }
            if (pairwise_negative(pts)) break;
        }
        if (pairwise_negative(pts) && pts.size() > best) best = pts.size();
    }
    return best;
}

struct NoSublinearRow {
    std::string policy;
    size_t t = 0;
    double mean_regret = 0.0;
    double stderr_regret = 0.0;
    double floor = 0.0;  ///< t / 4
    bool holds = false;
};

/// Monte-Carlo verification of the linear-regret floor on a calibrated
/// hard instance.  Rechecks the premises (uniform prior, near-one optimal
/// reward, near-zero off-optimal reward) before simulating.
inline std::vector<NoSublinearRow> no_sublinear_verify(const Instance& inst,
                                                       const std::vector<Policy>& policies,
                                                       size_t t_max, size_t runs,
                                                       uint64_t seed, unsigned threads = 1) {
    const size_t n = inst.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    for (double p : inst.prior)
        if (std::abs(p - inv_n) > 1e-12)
            throw PreconditionFailed("no_sublinear_verify: prior must be uniform");
    Precomputed pre(inst);
    for (size_t i = 0; i < n; ++i) {
        if (pre.opt_phi(i) < 1.0 - inv_n - 1e-12)
            throw PreconditionFailed("no_sublinear_verify: optimal reward below 1 - 1/N");
        for (size_t k = 0; k < inst.actions.size(); ++k) {
            if (k == inst.optimal_map[i]) continue;
            if (pre.p(k, i) > inv_n + 1e-12)
                throw PreconditionFailed("no_sublinear_verify: off-optimal reward above 1/N");
        }
    }
    if (t_max + 1 > n / 2)
        throw PreconditionFailed("no_sublinear_verify: t_max must be <= N/2 - 1");

    std::vector<NoSublinearRow> rows;
    for (const Policy& policy : policies) {
        RegretEstimate est = bayes_regret_estimate(pre, policy, t_max, runs, seed, threads);
        for (size_t t = 1; t <= t_max; ++t) {
            NoSublinearRow row;
            row.policy = policy_name(policy.kind);
            row.t = t;
            row.mean_regret = est.mean_cum[t - 1];
            row.stderr_regret = est.stderr_cum[t - 1];
            row.floor = static_cast<double>(t) / 4.0;
            row.holds = row.mean_regret >= row.floor - 3.0 * row.stderr_regret;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace fragile_bandits

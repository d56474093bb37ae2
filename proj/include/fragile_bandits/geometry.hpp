#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "fragile_bandits/errors.hpp"

namespace fragile_bandits {

using Vec = std::vector<double>;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kTieTolerance = 1e-9;
inline constexpr double kPriorTolerance = 1e-12;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline bool in_unit_ball(const Vec& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return norm(a) <= 1.0 + kNormTolerance;
}

/// A finite logistic bandit instance: actions and parameters in the unit
/// ball, a slope beta, a prior over parameters, and the injective map
/// taking each parameter to its unique optimal action.  Typically
/// |actions| == |parameters|; the non-monotone action-set pair needs
/// strictly more actions than parameters, so only injectivity is required.
struct Instance {
    size_t d = 0;
    double beta = 1.0;
    std::vector<Vec> actions;
    std::vector<Vec> parameters;
    std::vector<double> prior;
    std::vector<size_t> optimal_map;

    size_t size() const { return parameters.size(); }
};

/// Computes the parameter->action argmax map.  Throws AmbiguousOptimum if
/// the best and second-best inner products are within the tie tolerance,
/// and NonBijective if two parameters share an optimal action.
inline std::vector<size_t> derive_optimal_map(const std::vector<Vec>& actions,
                                              const std::vector<Vec>& parameters) {
    const size_t n = parameters.size();
    std::vector<size_t> map(n);
    std::vector<bool> used(actions.size(), false);
    for (size_t i = 0; i < n; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        double second = best;
        size_t best_j = 0;
        for (size_t j = 0; j < actions.size(); ++j) {
            double v = dot(actions[j], parameters[i]);
            if (v > best) {
                second = best;
                best = v;
                best_j = j;
            } else if (v > second) {
                second = v;
            }
        }
        if (actions.size() > 1 && best - second < kTieTolerance)
            throw AmbiguousOptimum("argmax tie for parameter " + std::to_string(i) +
                                   " (gap " + std::to_string(best - second) + ")");
        if (used[best_j])
            throw NonBijective("action " + std::to_string(best_j) +
                               " is optimal for multiple parameters");
        used[best_j] = true;
        map[i] = best_j;
    }
    return map;
}

/// Checks every structural invariant.  Violations are returned as
/// human-readable descriptors; an empty list means the instance is valid.
inline std::vector<std::string> validate_instance(const Instance& inst) {
    std::vector<std::string> v;
    const size_t n = inst.size();
    if (n < 1) v.push_back("empty parameter set");
    if (inst.actions.size() < n)
        v.push_back("fewer actions than parameters (no injective optimal map exists)");
    if (inst.prior.size() != n)
        v.push_back("|prior| != |parameters|");
    if (!(inst.beta > 0.0)) v.push_back("beta must be positive");
    for (size_t i = 0; i < inst.actions.size(); ++i) {
        if (inst.actions[i].size() != inst.d)
            v.push_back("action " + std::to_string(i) + " has wrong dimension");
        else if (!in_unit_ball(inst.actions[i]))
            v.push_back("action " + std::to_string(i) + " outside unit ball");
    }
    for (size_t i = 0; i < inst.parameters.size(); ++i) {
        if (inst.parameters[i].size() != inst.d)
            v.push_back("parameter " + std::to_string(i) + " has wrong dimension");
        else if (!in_unit_ball(inst.parameters[i]))
            v.push_back("parameter " + std::to_string(i) + " outside unit ball");
    }
    if (inst.prior.size() == n) {
        double sum = 0.0;
        bool nonneg = true;
        for (double p : inst.prior) {
            sum += p;
            if (p < 0.0) nonneg = false;
        }
        if (!nonneg) v.push_back("prior has negative component");
        if (std::abs(sum - 1.0) > kPriorTolerance)
            v.push_back("prior does not sum to 1");
    }
    if (inst.optimal_map.size() != n) {
        v.push_back("optimal_map has wrong length");
        return v;
    }
    std::vector<size_t> seen(inst.actions.size(), 0);
    bool injective = true;
    for (size_t m : inst.optimal_map) {
        if (m >= inst.actions.size()) {
            v.push_back("optimal_map index out of range");
            return v;
        }
        if (++seen[m] > 1) injective = false;
    }
    if (!injective) v.push_back("optimal_map is not a bijection onto its image");
    if (inst.actions.size() >= n && inst.d > 0) {
        for (size_t i = 0; i < n; ++i) {
            if (inst.actions[inst.optimal_map[i]].size() != inst.d ||
                inst.parameters[i].size() != inst.d)
                continue;
            double best = dot(inst.actions[inst.optimal_map[i]], inst.parameters[i]);
            for (size_t j = 0; j < inst.actions.size(); ++j) {
                if (j == inst.optimal_map[i]) continue;
                if (inst.actions[j].size() != inst.d) continue;
                double other = dot(inst.actions[j], inst.parameters[i]);
                if (other > best) {
                    v.push_back("optimal_map[" + std::to_string(i) +
                                "] is not the argmax action");
                    break;
                }
                if (best - other < kTieTolerance) {
                    v.push_back("ambiguous optimum for parameter " + std::to_string(i));
                    break;
                }
            }
        }
    }
    return v;
}

/// Worst-case optimal log-odds: min_i a(theta_i)^T theta_i.  Negative
/// values mean the Assumption-1 machinery does not apply.
inline double lambda_of(const Instance& inst) {
    double m = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < inst.size(); ++i)
        m = std::min(m, dot(inst.actions[inst.optimal_map[i]], inst.parameters[i]));
    return m;
}

/// min_i |a(theta_i)^T theta_i|; zero signals that the prior-work regret
/// bound (which needs delta > 0) is inapplicable.
inline double delta_of(const Instance& inst) {
    double m = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < inst.size(); ++i)
        m = std::min(m, std::abs(dot(inst.actions[inst.optimal_map[i]], inst.parameters[i])));
    return m;
}

inline std::vector<double> uniform_prior(size_t n) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

}  // namespace fragile_bandits

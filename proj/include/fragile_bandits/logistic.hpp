#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "fragile_bandits/errors.hpp"

namespace fragile_bandits {

/// Logistic link phi_beta(x) = e^{beta x} / (1 + e^{beta x}).
///
/// Evaluated through exp(-|beta x|) so the intermediate never overflows;
/// results are clamped into (0, 1) so downstream log-likelihoods stay
/// finite for any finite beta.
inline double phi(double beta, double x) {
    const double t = beta * x;
    double value;
    if (t >= 0.0) {
        value = 1.0 / (1.0 + std::exp(-t));
    } else {
        const double e = std::exp(t);
        value = e / (1.0 + e);
    }
    if (value <= 0.0) value = std::numeric_limits<double>::denorm_min();
    const double one_minus = std::nextafter(1.0, 0.0);
    if (value >= 1.0) value = one_minus;
    return value;
}

/// log phi_beta(x), computed directly in the log domain.
inline double log_phi(double beta, double x) {
    const double t = beta * x;
    if (t >= 0.0) return -std::log1p(std::exp(-t));
    return t - std::log1p(std::exp(t));
}

/// log(1 - phi_beta(x)) = log phi_beta(-x).
inline double log_one_minus_phi(double beta, double x) { return log_phi(beta, -x); }

/// Derivative envelope of phi_beta on [-1, 1]:
///   beta e^beta / (1+e^beta)^2  <=  phi'_beta(x)  <=  beta.
inline std::pair<double, double> phi_derivative_bounds(double beta) {
    const double s = phi(1.0, beta);  // base-e sigmoid of beta
    return {beta * s * (1.0 - s), beta};
}

struct LinkParams {
    double beta;
    double lambda;
};

/// Surrogate constants attached to the link-gap function gamma_{beta,lambda}.
struct GammaConstants {
    double z_star;  ///< argmax of gamma(zeta)/zeta on (0, 1+lambda]
    double w_mid;   ///< (lambda + z_star) / 2
    double chi;     ///< min over [z_star, 1+lambda] of gamma/bar_gamma
    double xi;      ///< gamma(w_mid) - gamma(lambda)
};

/// gamma_{beta,lambda}(zeta) = phi_beta(lambda) - phi_beta(lambda - zeta).
inline double gamma_link(double beta, double lambda, double zeta) {
    if (zeta < -1e-15 || zeta > 1.0 + lambda + 1e-12)
        throw DomainError("gamma: zeta outside [0, 1+lambda]");
    if (zeta <= 0.0) return 0.0;
    return phi(beta, lambda) - phi(beta, lambda - zeta);
}

namespace detail {

/// Golden-section maximization of a unimodal objective on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
    const double inv_phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = f(c), fd = f(d);
    int guard = 0;
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
        if (++guard > 500) throw ConvergenceError("golden-section bracket failed");
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// z_star maximizes gamma(zeta)/zeta; found by a coarse grid scan followed
/// by golden-section refinement (the objective is empirically unimodal,
/// the grid scan guards against flat regions).
inline GammaConstants gamma_constants(double beta, double lambda) {
    if (!(beta > 0.0)) throw DomainError("gamma_constants: beta must be positive");
    if (!(lambda > 0.0) || lambda > 1.0)
        throw DomainError("gamma_constants: lambda must be in (0, 1]");
    const double hi = 1.0 + lambda;
    auto objective = [&](double zeta) { return gamma_link(beta, lambda, zeta) / zeta; };

    // grid scan seeds the bracket
    const double step = 1e-3;
    double best_zeta = hi, best_val = objective(hi);
    for (double z = step; z < hi; z += step) {
        double v = objective(z);
        if (v > best_val) {
            best_val = v;
            best_zeta = z;
        }
    }
    double lo = std::max(step / 2.0, best_zeta - 2.0 * step);
    double up = std::min(hi, best_zeta + 2.0 * step);
    double z_star = detail::golden_max(objective, lo, up, 1e-10);
    if (objective(hi) >= objective(z_star)) z_star = hi;

    GammaConstants gc;
    gc.z_star = z_star;
    gc.w_mid = 0.5 * (lambda + z_star);
    // chi: worst ratio gamma/bar_gamma over the linear tail (it is 1 below z_star)
    const double slope = gamma_link(beta, lambda, z_star) / z_star;
    double chi = 1.0;
    const int kGrid = 4096;
    for (int i = 0; i <= kGrid; ++i) {
        double z = z_star + (hi - z_star) * static_cast<double>(i) / kGrid;
        double bar = slope * z;
        if (bar > 0.0) chi = std::min(chi, gamma_link(beta, lambda, z) / bar);
    }
    gc.chi = chi;
    gc.xi = gamma_link(beta, lambda, gc.w_mid) - gamma_link(beta, lambda, lambda);
    return gc;
}

/// Piecewise majorant of gamma: equals gamma below z_star, then the linear
/// extension through (z_star, gamma(z_star)).
inline double bar_gamma(double beta, double lambda, double zeta) {
    if (zeta < -1e-15 || zeta > 1.0 + lambda + 1e-12)
        throw DomainError("bar_gamma: zeta outside [0, 1+lambda]");
    const GammaConstants gc = gamma_constants(beta, lambda);
    if (zeta <= gc.z_star) return gamma_link(beta, lambda, zeta);
    return gamma_link(beta, lambda, gc.z_star) / gc.z_star * zeta;
}

/// bar_gamma against precomputed constants (avoids re-deriving z_star).
inline double bar_gamma(double beta, double lambda, double zeta, const GammaConstants& gc) {
    if (zeta < -1e-15 || zeta > 1.0 + lambda + 1e-12)
        throw DomainError("bar_gamma: zeta outside [0, 1+lambda]");
    if (zeta <= gc.z_star) return gamma_link(beta, lambda, zeta);
    return gamma_link(beta, lambda, gc.z_star) / gc.z_star * zeta;
}

}  // namespace fragile_bandits

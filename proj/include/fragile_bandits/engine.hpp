#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fragile_bandits/errors.hpp"
#include "fragile_bandits/geometry.hpp"
#include "fragile_bandits/logistic.hpp"
#include "fragile_bandits/rng.hpp"

namespace fragile_bandits {

/// Categorical posterior over parameter indices, kept in the log domain.
struct PosteriorState {
    std::vector<double> log_weights;

    static PosteriorState from_prior(const std::vector<double>& prior) {
        PosteriorState s;
        s.log_weights.resize(prior.size());
        for (size_t i = 0; i < prior.size(); ++i)
            s.log_weights[i] = prior[i] > 0.0
                                   ? std::log(prior[i])
                                   : -std::numeric_limits<double>::infinity();
        s.normalize();
        return s;
    }

    void normalize() {
        double m = -std::numeric_limits<double>::infinity();
        for (double w : log_weights) m = std::max(m, w);
        double sum = 0.0;
        for (double w : log_weights) sum += std::exp(w - m);
        double log_z = m + std::log(sum);
        for (double& w : log_weights) w -= log_z;
    }

    std::vector<double> probabilities() const {
        std::vector<double> p(log_weights.size());
        for (size_t i = 0; i < p.size(); ++i) p[i] = std::exp(log_weights[i]);
        return p;
    }
};

enum class PolicyKind { thompson, uniform_random, greedy_map };

struct Policy {
    PolicyKind kind = PolicyKind::thompson;
};

inline const char* policy_name(PolicyKind k) {
    switch (k) {
        case PolicyKind::thompson: return "thompson";
        case PolicyKind::uniform_random: return "uniform_random";
        case PolicyKind::greedy_map: return "greedy_map";
    }
    return "?";
}

inline PolicyKind policy_from_name(const std::string& s) {
    if (s == "thompson") return PolicyKind::thompson;
    if (s == "uniform_random" || s == "uniform") return PolicyKind::uniform_random;
    if (s == "greedy_map" || s == "greedy") return PolicyKind::greedy_map;
    throw DomainError("unknown policy: " + s);
}

/// Per-instance likelihood tables.  All simulation and information-ratio
/// arithmetic runs off these N x N caches, so per-step cost is O(N).
class Precomputed {
public:
    explicit Precomputed(const Instance& inst)
        : inst_(&inst), n_(inst.size()), na_(inst.actions.size()) {
        pa_.resize(na_ * n_);
        lp_.resize(na_ * n_);
        ln_.resize(na_ * n_);
        hb_.resize(na_ * n_);
        for (size_t k = 0; k < na_; ++k) {
            for (size_t i = 0; i < n_; ++i) {
                double x = dot(inst.actions[k], inst.parameters[i]);
                double p = phi(inst.beta, x);
                pa_[k * n_ + i] = p;
                lp_[k * n_ + i] = log_phi(inst.beta, x);
                ln_[k * n_ + i] = log_one_minus_phi(inst.beta, x);
                hb_[k * n_ + i] = p * lp_[k * n_ + i] + (1.0 - p) * ln_[k * n_ + i];
            }
        }
        opt_phi_.resize(n_);
        for (size_t i = 0; i < n_; ++i)
            opt_phi_[i] = pa_[inst.optimal_map[i] * n_ + i];
    }

    const Instance& instance() const { return *inst_; }
    size_t size() const { return n_; }
    /// phi(actions[k]^T theta[i])
    double p(size_t k, size_t i) const { return pa_[k * n_ + i]; }
    double logp(size_t k, size_t i) const { return lp_[k * n_ + i]; }
    double log1mp(size_t k, size_t i) const { return ln_[k * n_ + i]; }
    /// -H_b(phi(actions[k]^T theta[i])), i.e. p log p + (1-p) log(1-p)
    double neg_entropy(size_t k, size_t i) const { return hb_[k * n_ + i]; }
    /// phi(a(theta_i)^T theta_i)
    double opt_phi(size_t i) const { return opt_phi_[i]; }

private:
    const Instance* inst_;
    size_t n_;   // parameter count
    size_t na_;  // action count (>= n_ when extra actions are present)
    std::vector<double> pa_, lp_, ln_, hb_;
    std::vector<double> opt_phi_;
};

/// One exact Bayes step for a binary observation.
inline PosteriorState posterior_update(const PosteriorState& state, const Precomputed& pre,
                                       size_t action_index, int reward) {
    PosteriorState next = state;
    for (size_t i = 0; i < next.log_weights.size(); ++i)
        next.log_weights[i] += reward ? pre.logp(action_index, i)
                                      : pre.log1mp(action_index, i);
    next.normalize();
    return next;
}

inline size_t select_action(const Policy& policy, const PosteriorState& state,
                            const Precomputed& pre, CounterRng& rng) {
    const Instance& inst = pre.instance();
    switch (policy.kind) {
        case PolicyKind::thompson: {
            std::vector<double> p = state.probabilities();
            return inst.optimal_map[rng.categorical(p)];
        }
        case PolicyKind::uniform_random:
            return static_cast<size_t>(rng.below(inst.actions.size()));
        case PolicyKind::greedy_map: {
            size_t best = 0;
            for (size_t i = 1; i < state.log_weights.size(); ++i)
                if (state.log_weights[i] > state.log_weights[best]) best = i;
            return inst.optimal_map[best];
        }
    }
    return 0;
}

/// Exact one-stage information-ratio quantities, nats.
struct InfoRatioRecord {
    double numerator = 0.0;            ///< E_{t-1}[R* - R_t]
    double mutual_info = 0.0;          ///< I_{t-1}(A*; A_t, R_t)
    double gamma_t = 0.0;              ///< numerator^2 / mutual_info
    double variance_lower_bound = 0.0; ///< 2 E[Var[phi(X^T Yhat) | X]]
    bool degenerate = false;           ///< both numerator and MI at zero
};

/// Evaluates the information ratio by exact summation over the posterior;
/// no sampling is involved.  Mutual information uses the identity
/// I = sum_j q_j (H_b(phi_bar(a_j)) - sum_i p_i H_b(phi(a_j^T theta_i))).
inline InfoRatioRecord info_ratio_exact(const PosteriorState& posterior,
                                        const Precomputed& pre) {
    const Instance& inst = pre.instance();
    const size_t n = pre.size();
    std::vector<double> p = posterior.probabilities();

    InfoRatioRecord r;
    double exploit = 0.0;
    for (size_t i = 0; i < n; ++i) exploit += p[i] * pre.opt_phi(i);
    double cross = 0.0;
    double mi = 0.0;
    double var_sum = 0.0;
    for (size_t j = 0; j < n; ++j) {
        if (p[j] == 0.0) continue;
        size_t k = inst.optimal_map[j];
        double mean = 0.0, mean_sq = 0.0, neg_ent = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double pi = p[i];
            if (pi == 0.0) continue;
            double q = pre.p(k, i);
            mean += pi * q;
            mean_sq += pi * q * q;
            neg_ent += pi * pre.neg_entropy(k, i);
        }
        cross += p[j] * mean;
        double hbar = -(mean * std::log(mean) + (1.0 - mean) * std::log1p(-mean));
        mi += p[j] * (hbar + neg_ent);
        var_sum += p[j] * (mean_sq - mean * mean);
    }
    r.numerator = exploit - cross;
    r.mutual_info = std::max(0.0, mi);
    r.variance_lower_bound = 2.0 * var_sum;
    if (r.mutual_info < 1e-15) {
        if (r.numerator > 1e-8)
            throw DegeneratePosterior("vanishing information with nonzero regret");
        r.degenerate = true;
        r.gamma_t = 0.0;
    } else {
        r.gamma_t = r.numerator * r.numerator / r.mutual_info;
    }
    return r;
}

struct PrimitiveBoundResult {
    double lhs = 0.0;   ///< gamma_t
    double rhs = 0.0;   ///< numerator^2 / (2 E[Var[phi(X^T Yhat)|X]])
    bool holds = false;
    bool degenerate = false;
};

/// Primitive information-ratio bound: gamma_t <= numerator^2 / (2 E Var).
inline PrimitiveBoundResult primitive_bound_check(const PosteriorState& posterior,
                                                  const Precomputed& pre) {
    InfoRatioRecord r = info_ratio_exact(posterior, pre);
    PrimitiveBoundResult out;
    out.lhs = r.gamma_t;
    if (r.variance_lower_bound < 1e-300) {
        out.degenerate = true;
        out.holds = true;
        return out;
    }
    out.rhs = r.numerator * r.numerator / r.variance_lower_bound;
    out.holds = out.lhs <= out.rhs + 1e-10;
    return out;
}

struct InfoRatioBoundReport {
    double gamma_t = 0.0;
    double bound_small_beta = 0.0;  ///< d ((1+e^beta)^2 / e^beta)^2
    double bound_general = 0.0;     ///< 100 lambda^-2 max(eta, d)
    bool small_beta_applicable = false;
    bool general_applicable = false;
    bool small_beta_holds = true;
    bool general_holds = true;
};

/// (1+e^b)^2 / e^b = 2 + 2 cosh(b); overflow-free for moderate beta.
inline double lipschitz_ratio(double beta) { return 2.0 + 2.0 * std::cosh(beta); }

inline InfoRatioBoundReport info_ratio_bound_check(const PosteriorState& posterior,
                                                   const Precomputed& pre, size_t eta) {
    const Instance& inst = pre.instance();
    InfoRatioRecord r = info_ratio_exact(posterior, pre);
    InfoRatioBoundReport rep;
    rep.gamma_t = r.gamma_t;
    double ratio = lipschitz_ratio(inst.beta);
    rep.bound_small_beta = static_cast<double>(inst.d) * ratio * ratio;
    rep.small_beta_applicable = inst.beta <= 2.0;
    if (rep.small_beta_applicable)
        rep.small_beta_holds = r.gamma_t <= rep.bound_small_beta + 1e-8;
    double lambda = lambda_of(inst);
    rep.general_applicable = lambda > 0.0;
    if (rep.general_applicable) {
        double m = std::max(static_cast<double>(eta), static_cast<double>(inst.d));
        rep.bound_general = 100.0 / (lambda * lambda) * m;
        rep.general_holds = r.gamma_t <= rep.bound_general + 1e-8;
    }
    return rep;
}

struct NuRecord {
    size_t action_index = 0;
    double sigma = 0.0;  ///< x^T a^{-1}(x)
    double nu = 0.0;     ///< E[phi(X^T Y) - phi(X^T Yhat) | X = x]
    bool in_d = false;   ///< nu <= gamma_{beta,lambda}(w_{beta,lambda})
};

/// Diagnostic partition of the action set by the one-sided exploitation
/// gap nu; the threshold is the instance-free gamma(w) level.
inline std::vector<NuRecord> nu_partition(const PosteriorState& posterior,
                                          const Precomputed& pre) {
    const Instance& inst = pre.instance();
    double lambda = lambda_of(inst);
    if (!(lambda > 0.0)) throw PreconditionFailed("nu_partition requires lambda > 0");
    GammaConstants gc = gamma_constants(inst.beta, lambda);
    double threshold = gamma_link(inst.beta, lambda, gc.w_mid);
    std::vector<double> p = posterior.probabilities();
    std::vector<NuRecord> out(pre.size());
    for (size_t i = 0; i < pre.size(); ++i) {
        size_t k = inst.optimal_map[i];
        double mean = 0.0;
        for (size_t j = 0; j < pre.size(); ++j) mean += p[j] * pre.p(k, j);
        out[i].action_index = k;
        out[i].sigma = dot(inst.actions[k], inst.parameters[i]);
        out[i].nu = pre.opt_phi(i) - mean;
        out[i].in_d = out[i].nu <= threshold;
    }
    return out;
}

struct TheoremBounds {
    double thm1 = 0.0;
    double thm2 = 0.0;
    double prop5 = 0.0;
};

/// Closed-form regret-bound formulas; pure evaluation.
inline TheoremBounds theorem_bounds(double d, double T, double lambda, double eta,
                                    double beta, double delta, double gamma_bar) {
    if (!(d > 0.0) || !(T > 0.0) || !(lambda > 0.0) || !(eta > 0.0) || !(beta > 0.0) ||
        !(delta > 0.0) || !(gamma_bar > 0.0))
        throw DomainError("theorem_bounds: all arguments must be positive");
    if (lambda > 1.0) throw DomainError("theorem_bounds: lambda must be in (0, 1]");
    TheoremBounds b;
    b.thm1 = 40.0 * d * std::sqrt(T * std::log(3.0 + 3.0 * std::sqrt(2.0 * T) / (2.0 * d)));
    b.thm2 = 20.0 / lambda *
             std::sqrt(2.0 * d * std::max(eta, d) * T *
                       std::log(3.0 + 3.0 * std::sqrt(2.0 * T) / (2.0 * d * lambda)));
    double s = phi(1.0, beta * delta);  // base-e sigmoid of beta*delta
    double lip = beta * s * (1.0 - s);  // beta e^{beta delta} / (1+e^{beta delta})^2
    b.prop5 = std::sqrt(8.0 * d * gamma_bar * T *
                        std::log(3.0 + 6.0 * std::sqrt(2.0 * T) / d * lip));
    return b;
}

struct TrajectoryStep {
    size_t t = 0;  ///< 1-based stage index
    size_t action = 0;
    int reward = 0;
    double inst_regret = 0.0;  ///< phi(a(theta*)^T theta*) - phi(a_t^T theta*)
    std::optional<InfoRatioRecord> info_ratio;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    size_t theta_star_index = 0;
    uint64_t seed = 0;
};

/// Simulates one episode.  Fully reproducible from (inst, policy, T, seed):
/// theta* comes from stream 0, rewards from stream 1, and the policy's own
/// randomness from stream 2.
inline Trajectory run_episode(const Precomputed& pre, const Policy& policy, size_t horizon,
                              uint64_t seed, size_t info_ratio_every = 0) {
    const Instance& inst = pre.instance();
    CounterRng prior_rng = CounterRng::derive(seed, 0);
    CounterRng reward_rng = CounterRng::derive(seed, 1);
    CounterRng policy_rng = CounterRng::derive(seed, 2);

    Trajectory traj;
    traj.seed = seed;
    traj.theta_star_index = prior_rng.categorical(inst.prior);
    PosteriorState posterior = PosteriorState::from_prior(inst.prior);
    traj.steps.reserve(horizon);
    for (size_t t = 1; t <= horizon; ++t) {
        TrajectoryStep step;
        step.t = t;
        if (info_ratio_every > 0 && t % info_ratio_every == 0)
            step.info_ratio = info_ratio_exact(posterior, pre);
        step.action = select_action(policy, posterior, pre, policy_rng);
        step.reward = reward_rng.bernoulli(pre.p(step.action, traj.theta_star_index)) ? 1 : 0;
        step.inst_regret =
            pre.opt_phi(traj.theta_star_index) - pre.p(step.action, traj.theta_star_index);
        posterior = posterior_update(posterior, pre, step.action, step.reward);
        traj.steps.push_back(step);
    }
    return traj;
}

struct RegretEstimate {
    std::vector<double> mean_cum;    ///< mean cumulative regret, index t-1
    std::vector<double> stderr_cum;  ///< standard error of the mean, index t-1
    size_t runs = 0;
};

inline uint64_t episode_seed(uint64_t base_seed, size_t run_index) {
    return CounterRng::derive(base_seed, run_index).next_u64();
}

/// Monte-Carlo Bayesian regret using the pseudo-regret estimator (expected
/// per-step gap rather than realized rewards).  Episodes run on
/// independent seed streams; results do not depend on replication order.
inline RegretEstimate bayes_regret_estimate(const Precomputed& pre, const Policy& policy,
                                            size_t horizon, size_t runs, uint64_t base_seed,
                                            unsigned threads = 1) {
    std::vector<std::vector<double>> cum(runs);
    auto work = [&](size_t lo, size_t hi) {
        for (size_t r = lo; r < hi; ++r) {
            Trajectory traj = run_episode(pre, policy, horizon, episode_seed(base_seed, r));
            std::vector<double> c(horizon);
            double acc = 0.0;
            for (size_t t = 0; t < horizon; ++t) {
                acc += traj.steps[t].inst_regret;
                c[t] = acc;
            }
            cum[r] = std::move(c);
        }
    };
    if (threads <= 1 || runs < 2) {
        work(0, runs);
    } else {
        unsigned nt = std::min<unsigned>(threads, static_cast<unsigned>(runs));
        std::vector<std::thread> pool;
        size_t chunk = (runs + nt - 1) / nt;
        for (unsigned i = 0; i < nt; ++i) {
            size_t lo = i * chunk, hi = std::min(runs, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    RegretEstimate est;
    est.runs = runs;
    est.mean_cum.assign(horizon, 0.0);
    est.stderr_cum.assign(horizon, 0.0);
    for (size_t t = 0; t < horizon; ++t) {
        double sum = 0.0;
        for (size_t r = 0; r < runs; ++r) sum += cum[r][t];
        double mean = sum / static_cast<double>(runs);
        est.mean_cum[t] = mean;
        if (runs > 1) {
            double ss = 0.0;
            for (size_t r = 0; r < runs; ++r) {
                double dlt = cum[r][t] - mean;
                ss += dlt * dlt;
            }
            est.stderr_cum[t] =
                std::sqrt(ss / static_cast<double>(runs - 1) / static_cast<double>(runs));
        }
    }
    return est;
}

}  // namespace fragile_bandits

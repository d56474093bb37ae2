#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace fragile_bandits {

/// Counter-based splittable random number generator.
///
/// Each generator is a pure function of (key, counter); streams derived
/// from the same base seed with different stream ids are independent and
/// can be consumed in any order, so parallel replications stay
/// reproducible regardless of scheduling.
class CounterRng {
public:
    explicit CounterRng(uint64_t key, uint64_t counter = 0)
        : key_(key), counter_(counter) {}

    /// Stream derivation: mixes the stream id into the key.
    static CounterRng derive(uint64_t base_seed, uint64_t stream_id) {
        uint64_t key = mix(base_seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1));
        return CounterRng(mix(key ^ 0x6a09e667f3bcc909ULL));
    }

    uint64_t next_u64() {
        uint64_t z = key_ + counter_ * 0x9e3779b97f4a7c15ULL;
        ++counter_;
        return mix(z);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe for log().
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform_pos();
        double v = uniform();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        // rejection to avoid modulo bias
        uint64_t threshold = (~n + 1) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Index sampled from an unnormalized nonnegative weight vector.
    size_t categorical(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform() * total;
        double acc = 0.0;
        for (size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    /// Dirichlet(alpha, ..., alpha) sample of dimension n via Gamma draws
    /// (Marsaglia-Tsang for alpha >= 1, boost for alpha < 1).
    std::vector<double> dirichlet(size_t n, double alpha) {
        std::vector<double> g(n);
        double sum = 0.0;
        for (size_t i = 0; i < n; ++i) {
            g[i] = gamma_draw(alpha);
            sum += g[i];
        }
        if (sum <= 0.0) {
            for (auto& x : g) x = 1.0 / static_cast<double>(n);
            return g;
        }
        for (auto& x : g) x /= sum;
        return g;
    }

private:
    static uint64_t mix(uint64_t z) {
        z ^= z >> 33;
        z *= 0xff51afd7ed558ccdULL;
        z ^= z >> 33;
        z *= 0xc4ceb9fe1a85ec53ULL;
        z ^= z >> 33;
        return z;
    }

    double gamma_draw(double alpha) {
        if (alpha < 1.0) {
            double u = uniform_pos();
            return gamma_draw(alpha + 1.0) * std::pow(u, 1.0 / alpha);
        }
        double d = alpha - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform_pos();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

    uint64_t key_;
    uint64_t counter_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace fragile_bandits

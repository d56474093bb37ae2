#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

#include "fragile_bandits/errors.hpp"
#include "fragile_bandits/geometry.hpp"
#include "fragile_bandits/rng.hpp"

namespace fragile_bandits {

/// Inner products in (-kStrictNegTolerance, 0) count as non-negative, so
/// the edge rule stays on the conservative side of the strict inequality.
inline constexpr double kStrictNegTolerance = 1e-12;

/// Undirected graph over parameter indices; vertices i, j are adjacent iff
/// a(theta_i)^T theta_j < 0 and a(theta_j)^T theta_i < 0.
struct FragilityGraph {
    size_t n = 0;
    std::vector<std::vector<bool>> adj;

    bool edge(size_t i, size_t j) const { return adj[i][j]; }

    size_t edge_count() const {
        size_t c = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (adj[i][j]) ++c;
        return c;
    }
};

struct CliqueResult {
    size_t size = 0;
    std::vector<size_t> witness;
    bool exact = false;
};

inline constexpr size_t kExactCliqueCap = 64;

inline FragilityGraph build_fragility_graph(const Instance& inst) {
    const size_t n = inst.size();
    FragilityGraph g;
    g.n = n;
    g.adj.assign(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double ij = dot(inst.actions[inst.optimal_map[i]], inst.parameters[j]);
            double ji = dot(inst.actions[inst.optimal_map[j]], inst.parameters[i]);
            if (ij <= -kStrictNegTolerance && ji <= -kStrictNegTolerance) {
                g.adj[i][j] = true;
                g.adj[j][i] = true;
            }
        }
    }
    return g;
}

namespace detail {

/// Branch-and-bound maximum clique over a <=64-vertex bitset graph, with a
/// greedy-coloring upper bound at every node (Tomita-style).
class BitsetCliqueSolver {
public:
    explicit BitsetCliqueSolver(const FragilityGraph& g) : n_(g.n), nbr_(g.n, 0) {
        for (size_t i = 0; i < n_; ++i)
            for (size_t j = 0; j < n_; ++j)
                if (g.adj[i][j]) nbr_[i] |= (uint64_t{1} << j);
    }

    std::vector<size_t> solve() {
        best_.clear();
        current_.clear();
        uint64_t all = (n_ == 64) ? ~uint64_t{0} : ((uint64_t{1} << n_) - 1);
        expand(all);
        return best_;
    }

private:
    void expand(uint64_t candidates) {
        if (candidates == 0) {
            if (current_.size() > best_.size()) best_ = current_;
            return;
        }
        // greedy coloring bound: vertices in color class c can add at most c
        std::vector<std::pair<size_t, size_t>> order;  // (vertex, color)
        uint64_t uncolored = candidates;
        size_t color = 0;
        while (uncolored) {
            ++color;
            uint64_t avail = uncolored;
            while (avail) {
                size_t v = static_cast<size_t>(std::countr_zero(avail));
                order.emplace_back(v, color);
                avail &= ~(nbr_[v] | (uint64_t{1} << v));
                uncolored &= ~(uint64_t{1} << v);
            }
        }
        // branch in decreasing-color order
        for (size_t idx = order.size(); idx-- > 0;) {
            auto [v, c] = order[idx];
            if (current_.size() + c <= best_.size()) return;
            current_.push_back(v);
            expand(candidates & nbr_[v]);
            current_.pop_back();
            candidates &= ~(uint64_t{1} << v);
        }
    }

    size_t n_;
    std::vector<uint64_t> nbr_;
    std::vector<size_t> best_;
    std::vector<size_t> current_;
};

}  // namespace detail

inline CliqueResult max_clique_exact(const FragilityGraph& g) {
    if (g.n > kExactCliqueCap)
        throw SizeCapExceeded("graph has " + std::to_string(g.n) +
                              " vertices; exact solver cap is " +
                              std::to_string(kExactCliqueCap));
    CliqueResult r;
    r.exact = true;
    if (g.n == 0) return r;
    detail::BitsetCliqueSolver solver(g);
    r.witness = solver.solve();
    if (r.witness.empty()) r.witness = {0};  // any single vertex is a clique
    std::sort(r.witness.begin(), r.witness.end());
    r.size = r.witness.size();
    return r;
}

/// Randomized greedy lower bound: repeatedly grows a clique along a random
/// vertex permutation and keeps the best over the given restarts.
inline CliqueResult max_clique_greedy(const FragilityGraph& g, int restarts,
                                      uint64_t seed = 0x5eed) {
    CliqueResult r;
    r.exact = false;
    if (g.n == 0) return r;
    CounterRng rng(seed);
    std::vector<size_t> perm(g.n);
    for (size_t i = 0; i < g.n; ++i) perm[i] = i;
    for (int t = 0; t < std::max(1, restarts); ++t) {
        for (size_t i = g.n; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.below(i)]);
        std::vector<size_t> clique;
        for (size_t v : perm) {
            bool ok = true;
            for (size_t u : clique)
                if (!g.edge(u, v)) {
                    ok = false;
                    break;
                }
            if (ok) clique.push_back(v);
        }
        if (clique.size() > r.witness.size()) r.witness = clique;
    }
    std::sort(r.witness.begin(), r.witness.end());
    r.size = r.witness.size();
    return r;
}

/// Fragility dimension eta of an instance: the clique number of its
/// fragility graph.  Falls back to the greedy heuristic above the exact
/// solver's cap (result then carries exact = false).
inline CliqueResult fragility_dimension(const Instance& inst) {
    FragilityGraph g = build_fragility_graph(inst);
    if (g.n <= kExactCliqueCap) return max_clique_exact(g);
    return max_clique_greedy(g, 200);
}

/// Enumerates maximal cliques (Bron-Kerbosch with pivoting); stops after
/// max_count cliques to bound work on dense graphs.
inline std::vector<std::vector<size_t>> maximal_cliques(const FragilityGraph& g,
                                                        size_t max_count = 20000) {
    std::vector<uint64_t> nbr(g.n, 0);
    for (size_t i = 0; i < g.n; ++i)
        for (size_t j = 0; j < g.n; ++j)
            if (g.adj[i][j]) nbr[i] |= (uint64_t{1} << j);
    std::vector<std::vector<size_t>> out;
    std::function<void(uint64_t, uint64_t, uint64_t)> bk = [&](uint64_t r, uint64_t p,
                                                               uint64_t x) {
        if (out.size() >= max_count) return;
        if (p == 0 && x == 0) {
            std::vector<size_t> clique;
            uint64_t m = r;
            while (m) {
                size_t v = static_cast<size_t>(std::countr_zero(m));
                clique.push_back(v);
                m &= m - 1;
            }
            out.push_back(std::move(clique));
            return;
        }
        uint64_t px = p | x;
        size_t pivot = static_cast<size_t>(std::countr_zero(px));
        size_t best_deg = 0;
        uint64_t m = px;
        while (m) {
            size_t v = static_cast<size_t>(std::countr_zero(m));
            size_t deg = static_cast<size_t>(std::popcount(p & nbr[v]));
            if (deg >= best_deg) {
                best_deg = deg;
                pivot = v;
            }
            m &= m - 1;
        }
        uint64_t ext = p & ~nbr[pivot];
        while (ext) {
            size_t v = static_cast<size_t>(std::countr_zero(ext));
            uint64_t bit = uint64_t{1} << v;
            bk(r | bit, p & nbr[v], x & nbr[v]);
            p &= ~bit;
            x |= bit;
            ext &= ~bit;
            ext &= p;
        }
    };
    if (g.n > 0 && g.n <= 64) {
        uint64_t all = (g.n == 64) ? ~uint64_t{0} : ((uint64_t{1} << g.n) - 1);
        bk(0, all, 0);
    }
    return out;
}

struct TuranCheckResult {
    double prob = 0.0;
    double bound = 0.0;
    bool holds = false;
};

namespace detail {

inline void require_positive_log_odds(const Instance& inst) {
    for (size_t i = 0; i < inst.size(); ++i)
        if (dot(inst.actions[inst.optimal_map[i]], inst.parameters[i]) <= 0.0)
            throw PreconditionFailed("optimal log-odds must be positive for the "
                                     "Turan-type bound");
}

/// P(U_hat^T V >= 0) for V ~ dist, U_hat = a(V_hat) with V_hat iid.
inline double turan_prob(const Instance& inst, const std::vector<double>& dist) {
    const size_t n = inst.size();
    double prob = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (dist[i] == 0.0) continue;
        for (size_t j = 0; j < n; ++j) {
            if (dist[j] == 0.0) continue;
            double v = dot(inst.actions[inst.optimal_map[i]], inst.parameters[j]);
            if (v > -kStrictNegTolerance) prob += dist[i] * dist[j];
        }
    }
    return prob;
}

}  // namespace detail

/// Exact evaluation of the Turan-type bound P(U_hat^T V >= 0) >= 1/(2 eta).
inline TuranCheckResult turan_lower_bound_check(const Instance& inst,
                                                const std::vector<double>& dist) {
    detail::require_positive_log_odds(inst);
    TuranCheckResult r;
    r.prob = detail::turan_prob(inst, dist);
    r.bound = 1.0 / (2.0 * static_cast<double>(fragility_dimension(inst).size));
    r.holds = r.prob >= r.bound - 1e-12;
    return r;
}

struct AdversarialSearchResult {
    double worst_prob = 1.0;
    std::vector<double> worst_dist;
};

/// Searches for the distribution minimizing P(U_hat^T V >= 0).  Candidate
/// optima concentrate on cliques of the fragility graph (mass-moving
/// argument), so the search evaluates uniform distributions on all maximal
/// cliques plus Dirichlet-random distributions.
inline AdversarialSearchResult turan_adversarial_search(const Instance& inst,
                                                        int iterations,
                                                        uint64_t seed = 0x7a4abadULL) {
    detail::require_positive_log_odds(inst);
    const size_t n = inst.size();
    AdversarialSearchResult best;
    best.worst_dist.assign(n, 0.0);
    best.worst_dist[0] = 1.0;
    best.worst_prob = detail::turan_prob(inst, best.worst_dist);

    FragilityGraph g = build_fragility_graph(inst);
    for (const auto& clique : maximal_cliques(g)) {
        std::vector<double> d(n, 0.0);
        for (size_t v : clique) d[v] = 1.0 / static_cast<double>(clique.size());
        double p = detail::turan_prob(inst, d);
        if (p < best.worst_prob) {
            best.worst_prob = p;
            best.worst_dist = d;
        }
    }
    CounterRng rng(seed);
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> d = rng.dirichlet(n, 0.3);
        double p = detail::turan_prob(inst, d);
        if (p < best.worst_prob) {
            best.worst_prob = p;
            best.worst_dist = d;
        }
    }
    return best;
}

/// Restriction inequality (corollary form): with S a subset of parameter
/// indices, the joint event {U_hat^T V >= 0, U_hat in f*(S), V in S} keeps
/// at least a 1/(2 eta) share of P(U_hat in f*(S), V in S).
inline bool corollary_restriction_check(const Instance& inst,
                                        const std::vector<double>& dist,
                                        const std::vector<size_t>& subset) {
    detail::require_positive_log_odds(inst);
    std::vector<bool> in_s(inst.size(), false);
    for (size_t v : subset) in_s[v] = true;
    double lhs = 0.0, mass = 0.0;
    for (size_t i = 0; i < inst.size(); ++i) {
        if (!in_s[i] || dist[i] == 0.0) continue;
        for (size_t j = 0; j < inst.size(); ++j) {
            if (!in_s[j] || dist[j] == 0.0) continue;
            // U_hat = a(V_hat): U_hat in f*(S) iff V_hat in S (bijection)
            mass += dist[i] * dist[j];
            double v = dot(inst.actions[inst.optimal_map[i]], inst.parameters[j]);
            if (v > -kStrictNegTolerance) lhs += dist[i] * dist[j];
        }
    }
    double eta = static_cast<double>(fragility_dimension(inst).size);
    return lhs >= mass / (2.0 * eta) - 1e-12;
}

}  // namespace fragile_bandits

#pragma once

// Randomized verification sweeps shared by the `check` CLI subcommand and
// the acceptance tests.  Each suite returns a machine-readable report;
// counterexamples are captured as JSON artifacts for reproduction.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fragile_bandits/checks.hpp"
#include "fragile_bandits/engine.hpp"
#include "fragile_bandits/fragility.hpp"
#include "fragile_bandits/generators.hpp"
#include "fragile_bandits/io.hpp"
#include "fragile_bandits/logistic.hpp"

namespace fragile_bandits {

struct SuiteReport {
    std::string suite;
    size_t cases = 0;
    size_t failures = 0;
    std::vector<Json> artifacts;

    bool green() const { return failures == 0; }

    void fail(Json artifact) {
        ++failures;
        if (artifacts.size() < 16) artifacts.push_back(std::move(artifact));
    }
};

inline Json suite_report_json(const SuiteReport& r) {
    Json j;
    j["suite"] = r.suite;
    j["cases"] = r.cases;
    j["failures"] = r.failures;
    j["artifacts"] = r.artifacts;
    return j;
}

/// Random instance with positive optimal log-odds (the Turan-type bound's
/// precondition).  Mixes sphere-matched, lifted-code, and cone families.
inline Instance random_positive_instance(CounterRng& rng) {
    double pick = rng.uniform();
    double beta = rng.uniform(0.5, 8.0);
    if (pick < 0.7) {
        size_t d = 2 + rng.below(4);
        size_t n = 2 + rng.below(11);
        return gen_sphere_matched(d, n, rng.next_u64(), beta);
    }
    if (pick < 0.9) {
        size_t d = 3 + rng.below(3);
        double iota = rng.uniform(0.15, 0.85);
        size_t target = 3 + rng.below(6);
        ExpFamilyResult r =
            gen_exponential_family(d, iota, rng.next_u64(), target, beta, 4000);
        return r.instance;
    }
    size_t n = 3 + rng.below(10);
    double h = rng.uniform(0.3, 0.9);
    double lo = detail::cone_gamma_lower(n, h);
    return gen_cone_iota0(n, h, 0.5 * (lo + 1.0), beta);
}

/// Random valid instance without a sign constraint on the log-odds.
inline Instance random_valid_instance(CounterRng& rng) {
    double beta = rng.uniform(0.5, 8.0);
    size_t d = 2 + rng.below(4);
    size_t n = 2 + rng.below(11);
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::vector<Vec> actions, params;
        for (size_t i = 0; i < n; ++i) {
            Vec a = random_unit_vector(d, rng);
            Vec p = random_unit_vector(d, rng);
            double scale_a = std::sqrt(rng.uniform(0.1, 1.0));
            double scale_p = std::sqrt(rng.uniform(0.1, 1.0));
            for (double& x : a) x *= scale_a;
            for (double& x : p) x *= scale_p;
            actions.push_back(a);
            params.push_back(p);
        }
        Instance inst;
        inst.d = d;
        inst.beta = beta;
        inst.actions = actions;
        inst.parameters = params;
        inst.prior = uniform_prior(n);
        try {
            inst.optimal_map = derive_optimal_map(actions, params);
        } catch (const AmbiguousOptimum&) {
            continue;
        } catch (const NonBijective&) {
            continue;
        }
        return inst;
    }
    return gen_sphere_matched(d, n, rng.next_u64(), beta);
}

inline SuiteReport suite_lemma_marginals(size_t cases, uint64_t seed) {
    SuiteReport rep;
    rep.suite = "lemma_marginals";
    CounterRng rng = CounterRng::derive(seed, 101);
    for (size_t c = 0; c < cases; ++c) {
        ++rep.cases;
        size_t d = 1 + rng.below(5);
        size_t atoms = 1 + rng.below(8);
        DiscreteJoint joint;
        std::vector<double> probs = rng.dirichlet(atoms, 0.7);
        for (size_t a = 0; a < atoms; ++a) {
            Vec u = random_unit_vector(d, rng);
            Vec v = random_unit_vector(d, rng);
            double su = std::sqrt(rng.uniform(0.0, 1.0));
            double sv = std::sqrt(rng.uniform(0.0, 1.0));
            for (double& x : u) x *= su;
            for (double& x : v) x *= sv;
            joint.atoms.push_back({u, v, probs[a]});
        }
        InequalityCheck r = lemma_marginals_check(joint);
        if (!r.holds) {
            Json art;
            art["case"] = c;
            art["lhs"] = r.lhs;
            art["rhs"] = r.rhs;
            Json ja = Json::array();
            for (const auto& a : joint.atoms)
                ja.push_back({{"u", a.u}, {"v", a.v}, {"prob", a.prob}});
            art["atoms"] = ja;
            rep.fail(art);
        }
    }
    return rep;
}

inline SuiteReport suite_lemma_gbb(size_t cases, uint64_t seed) {
    SuiteReport rep;
    rep.suite = "lemma_gbb";
    CounterRng rng = CounterRng::derive(seed, 202);
    for (size_t c = 0; c < cases; ++c) {
        ++rep.cases;
        MonotoneRatioFn fn;
        double hi = 1.0;
        double pick = rng.uniform();
        if (pick < 0.4) {
            double k = rng.uniform(1.0, 4.0);
            fn.f = [k](double z) { return std::pow(z, k); };
            fn.name = "power";
            hi = rng.uniform(0.5, 3.0);
        } else if (pick < 0.6) {
            double a = rng.uniform(0.1, 2.0), b = rng.uniform(0.0, 2.0);
            fn.f = [a, b](double z) { return a * z + b * z * z; };
            fn.name = "affine_ratio";
            hi = rng.uniform(0.5, 3.0);
        } else {
            // the use-site: bar_gamma has a non-decreasing ratio on [0, 1+lambda]
            double beta = rng.uniform(0.5, 10.0);
            double lambda = rng.uniform(0.05, 1.0);
            GammaConstants gc = gamma_constants(beta, lambda);
            fn.f = [beta, lambda, gc](double z) { return bar_gamma(beta, lambda, z, gc); };
            fn.name = "bar_gamma";
            hi = 1.0 + lambda;
        }
        size_t atoms = 2 + rng.below(7);
        ScalarDist dist;
        std::vector<double> probs = rng.dirichlet(atoms, 1.0);
        for (size_t a = 0; a < atoms; ++a) dist.emplace_back(rng.uniform(0.0, hi), probs[a]);
        InequalityCheck r;
        try {
            r = lemma_gbb_check(fn, dist);
        } catch (const PreconditionFailed&) {
            continue;  // rejected input, not a counterexample
        }
        if (!r.holds) {
            Json art;
            art["case"] = c;
            art["fn"] = fn.name;
            art["lhs"] = r.lhs;
            art["rhs"] = r.rhs;
            Json jd = Json::array();
            for (const auto& [v, p] : dist) jd.push_back({{"value", v}, {"prob", p}});
            art["dist"] = jd;
            rep.fail(art);
        }
    }
    return rep;
}

inline SuiteReport suite_capacity(size_t attempts, uint64_t seed) {
    SuiteReport rep;
    rep.suite = "capacity";
    for (size_t d = 1; d <= 8; ++d) {
        ++rep.cases;
        size_t found = pairwise_negative_capacity(d, attempts, seed + d);
        if (found != d + 1) {
            Json art;
            art["d"] = d;
            art["found"] = found;
            art["expected"] = d + 1;
            rep.fail(art);
        }
    }
    return rep;
}

inline SuiteReport suite_turan(size_t cases, uint64_t seed) {
    SuiteReport rep;
    rep.suite = "turan";
    CounterRng rng = CounterRng::derive(seed, 303);
    for (size_t c = 0; c < cases; ++c) {
        ++rep.cases;
        Instance inst = random_positive_instance(rng);
        const size_t n = inst.size();
        std::vector<double> dist;
        double pick = rng.uniform();
        if (pick < 0.6) {
            dist = rng.dirichlet(n, rng.uniform() < 0.5 ? 0.3 : 1.5);
        } else if (pick < 0.8) {
            dist.assign(n, 0.0);
            dist[rng.below(n)] = 1.0;
        } else {
            dist = uniform_prior(n);
        }
        TuranCheckResult r = turan_lower_bound_check(inst, dist);
        bool matched = inst.actions == inst.parameters;
        bool ok = r.holds;
        if (matched && ok) ok = r.prob >= 2.0 * r.bound - 1e-12;  // 1/eta on A = Theta
        if (!ok) {
            Json art;
            art["case"] = c;
            art["prob"] = r.prob;
            art["bound"] = r.bound;
            art["matched"] = matched;
            art["instance"] = instance_to_json(inst);
            art["dist"] = dist;
            rep.fail(art);
        }
        if (c % 100 == 0) {
            // spot-check the adversarial search and the restriction corollary
            AdversarialSearchResult adv = turan_adversarial_search(inst, 200, rng.next_u64());
            double eta = static_cast<double>(fragility_dimension(inst).size);
            if (adv.worst_prob < 1.0 / (2.0 * eta) - 1e-12) {
                Json art;
                art["case"] = c;
                art["adversarial_prob"] = adv.worst_prob;
                art["eta"] = eta;
                art["instance"] = instance_to_json(inst);
                rep.fail(art);
            }
            std::vector<size_t> subset;
            for (size_t i = 0; i < n; ++i)
                if (rng.uniform() < 0.5) subset.push_back(i);
            if (!corollary_restriction_check(inst, dist, subset)) {
                Json art;
                art["case"] = c;
                art["subset"] = subset;
                art["instance"] = instance_to_json(inst);
                rep.fail(art);
            }
        }
    }
    return rep;
}

struct Prop6Params {
    size_t d = 30;
    double iota = 0.5;
    size_t n = 20;
    size_t t_max = 9;
    size_t runs = 2000;
};

inline SuiteReport suite_prop6(const Prop6Params& p, uint64_t seed, unsigned threads = 1) {
    SuiteReport rep;
    rep.suite = "prop6";
    ExpFamilyResult fam = gen_exponential_family(p.d, p.iota, seed, p.n, 1.0, 400000);
    if (!fam.target_reached) {
        ++rep.cases;
        Json art;
        art["error"] = "packing target unreached";
        art["achieved"] = fam.achieved;
        art["requested"] = p.n;
        rep.fail(art);
        return rep;
    }
    Instance inst = fam.instance;
    inst.beta = calibrate_hard_beta(inst, inst.size());
    std::vector<Policy> policies = {{PolicyKind::thompson},
                                    {PolicyKind::greedy_map},
                                    {PolicyKind::uniform_random}};
    auto rows = no_sublinear_verify(inst, policies, p.t_max, p.runs, seed + 1, threads);
    for (const auto& row : rows) {
        ++rep.cases;
        if (!row.holds) {
            Json art;
            art["policy"] = row.policy;
            art["t"] = row.t;
            art["mean_regret"] = row.mean_regret;
            art["stderr"] = row.stderr_regret;
            art["floor"] = row.floor;
            rep.fail(art);
        }
    }
    return rep;
}

}  // namespace fragile_bandits

// Command-line surface for the logistic-bandit toolkit: instance
// generation, seeded simulation, exact information-ratio evaluation,
// fragility analysis, link constants, bound formulas, and the randomized
// verification suites.  Exit codes: 0 success, 1 failed assertion,
// 2 usage or I/O error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <fragile_bandits/fragile_bandits.hpp>

namespace fb = fragile_bandits;
namespace fs = std::filesystem;

namespace {

struct Globals {
    uint64_t seed = 0;
    std::string out = ".";
    unsigned threads = 0;  // 0 = resolve from env, default 1
    std::string format = "csv";
};

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FRAGILE_BANDITS_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

fs::path out_path(const Globals& g, const std::string& name) {
    fs::create_directories(g.out);
    return fs::path(g.out) / name;
}

fb::Json with_provenance(const fb::Instance& inst, const std::string& family,
                         fb::Json config, uint64_t seed) {
    fb::Json j = fb::instance_to_json(inst);
    fb::Json prov;
    prov["generator"] = family;
    prov["config"] = std::move(config);
    prov["seed"] = seed;
    j["provenance"] = std::move(prov);
    return j;
}

// ---------------------------------------------------------------- simulate

struct SimulateConfig {
    std::string instance_path;
    std::string policy = "thompson";
    size_t horizon = 1000;
    size_t runs = 1;
    uint64_t base_seed = 0;
    size_t info_ratio_every = 0;
    bool emit_svg = false;
};

fb::Json simulate_config_json(const SimulateConfig& c) {
    fb::Json j;
    j["command"] = "simulate";
    j["instance_path"] = c.instance_path;
    j["policy"] = c.policy;
    j["horizon"] = c.horizon;
    j["runs"] = c.runs;
    j["base_seed"] = c.base_seed;
    j["info_ratio_every"] = c.info_ratio_every;
    j["emit_svg"] = c.emit_svg;
    return j;
}

void simulate_config_from_json(const fb::Json& raw, SimulateConfig& c) {
    const fb::Json& j = raw.contains("config") ? raw.at("config") : raw;
    c.instance_path = j.at("instance_path").get<std::string>();
    c.policy = j.value("policy", c.policy);
    c.horizon = j.value("horizon", c.horizon);
    c.runs = j.value("runs", c.runs);
    c.base_seed = j.value("base_seed", c.base_seed);
    c.info_ratio_every = j.value("info_ratio_every", c.info_ratio_every);
    c.emit_svg = j.value("emit_svg", c.emit_svg);
}

std::vector<fb::Trajectory> run_all(const fb::Precomputed& pre, const fb::Policy& policy,
                                    const SimulateConfig& cfg, unsigned threads) {
    std::vector<fb::Trajectory> trajs(cfg.runs);
    auto work = [&](size_t lo, size_t hi) {
        for (size_t r = lo; r < hi; ++r)
            trajs[r] = fb::run_episode(pre, policy, cfg.horizon,
                                       fb::episode_seed(cfg.base_seed, r),
                                       cfg.info_ratio_every);
    };
    if (threads <= 1 || cfg.runs < 2) {
        work(0, cfg.runs);
    } else {
        unsigned nt = std::min<unsigned>(threads, static_cast<unsigned>(cfg.runs));
        size_t chunk = (cfg.runs + nt - 1) / nt;
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nt; ++i) {
            size_t lo = i * chunk, hi = std::min(cfg.runs, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return trajs;
}

double thm1_at(double d, double t) {
    return 40.0 * d * std::sqrt(t * std::log(3.0 + 3.0 * std::sqrt(2.0 * t) / (2.0 * d)));
}

double thm2_at(double d, double t, double lambda, double eta) {
    return 20.0 / lambda *
           std::sqrt(2.0 * d * std::max(eta, d) * t *
                     std::log(3.0 + 3.0 * std::sqrt(2.0 * t) / (2.0 * d * lambda)));
}

void write_info_ratio_csv(const fs::path& path, const fb::Json& config,
                          const std::vector<fb::Trajectory>& trajs, double bound_general,
                          double bound_small_beta) {
    fb::CsvWriter csv;
    csv.comment("config " + config.dump());
    csv.header({"run_id", "t", "numerator", "mutual_info", "gamma_t", "bound_general",
                "bound_small_beta"});
    for (size_t r = 0; r < trajs.size(); ++r)
        for (const auto& step : trajs[r].steps) {
            if (!step.info_ratio) continue;
            const auto& ir = *step.info_ratio;
            csv.row()
                .cell(r)
                .cell(step.t)
                .cell(ir.numerator)
                .cell(ir.mutual_info)
                .cell(ir.gamma_t)
                .cell(bound_general)
                .cell(bound_small_beta);
        }
    csv.save(path.string());
}

int cmd_simulate(const Globals& g, const SimulateConfig& cfg) {
    fb::Instance inst = fb::load_instance(cfg.instance_path);
    auto violations = fb::validate_instance(inst);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "invalid instance: " << v << "\n";
        return 2;
    }
    fb::Precomputed pre(inst);
    fb::Policy policy{fb::policy_from_name(cfg.policy)};
    unsigned threads = resolve_threads(g.threads);
    fb::Json config = simulate_config_json(cfg);

    std::vector<fb::Trajectory> trajs = run_all(pre, policy, cfg, threads);

    fb::CsvWriter csv;
    csv.comment("config " + config.dump());
    csv.header({"run_id", "t", "action", "reward", "inst_regret", "cum_regret"});
    std::vector<double> mean_cum(cfg.horizon, 0.0);
    for (size_t r = 0; r < trajs.size(); ++r) {
        double acc = 0.0;
        for (const auto& step : trajs[r].steps) {
            acc += step.inst_regret;
            mean_cum[step.t - 1] += step.inst_regret;
            csv.row()
                .cell(r)
                .cell(step.t)
                .cell(step.action)
                .cell(step.reward)
                .cell(step.inst_regret)
                .cell(acc);
        }
    }
    csv.save(out_path(g, "trajectory.csv").string());
    {
        double acc = 0.0;
        for (size_t t = 0; t < cfg.horizon; ++t) {
            acc += mean_cum[t] / static_cast<double>(cfg.runs);
            mean_cum[t] = acc;
        }
    }

    fb::CliqueResult eta = fb::fragility_dimension(inst);
    double lambda = fb::lambda_of(inst);
    double delta = fb::delta_of(inst);
    double d = static_cast<double>(inst.d);
    double bound_general = lambda > 0.0
                               ? 100.0 / (lambda * lambda) *
                                     std::max<double>(static_cast<double>(eta.size), d)
                               : std::numeric_limits<double>::quiet_NaN();
    double ratio = fb::lipschitz_ratio(inst.beta);
    double bound_small_beta = d * ratio * ratio;

    if (cfg.info_ratio_every > 0)
        write_info_ratio_csv(out_path(g, "info_ratio.csv"), config, trajs, bound_general,
                             bound_small_beta);

    bool thm1_every_t = true, thm2_every_t = true;
    for (size_t t = 1; t <= cfg.horizon; ++t) {
        double tt = static_cast<double>(t);
        if (mean_cum[t - 1] > thm1_at(d, tt)) thm1_every_t = false;
        if (lambda > 0.0 &&
            mean_cum[t - 1] > thm2_at(d, tt, lambda, static_cast<double>(eta.size)))
            thm2_every_t = false;
    }

    fb::Json summary;
    summary["config"] = config;
    fb::Json ji;
    ji["d"] = inst.d;
    ji["beta"] = inst.beta;
    ji["n_parameters"] = inst.size();
    ji["n_actions"] = inst.actions.size();
    ji["lambda"] = lambda;
    ji["delta"] = delta;
    ji["eta"] = eta.size;
    ji["eta_exact"] = eta.exact;
    summary["instance"] = ji;
    fb::Json res;
    res["final_mean_cum_regret"] = mean_cum.back();
    fb::Json bounds;
    bounds["thm1"] = thm1_at(d, static_cast<double>(cfg.horizon));
    if (lambda > 0.0) {
        bounds["thm2"] = thm2_at(d, static_cast<double>(cfg.horizon), lambda,
                                 static_cast<double>(eta.size));
        if (delta > 0.0) {
            fb::TheoremBounds tb =
                fb::theorem_bounds(d, static_cast<double>(cfg.horizon), lambda,
                                   static_cast<double>(eta.size), inst.beta, delta,
                                   bound_general);
            bounds["prop5"] = tb.prop5;
        } else {
            bounds["prop5"] = nullptr;
        }
    } else {
        bounds["thm2"] = nullptr;
        bounds["prop5"] = nullptr;
    }
    res["bounds_at_horizon"] = bounds;
    fb::Json holds;
    holds["thm1_every_t"] = thm1_every_t;
    holds["thm2_every_t"] = lambda > 0.0 ? fb::Json(thm2_every_t) : fb::Json(nullptr);
    res["holds"] = holds;
    summary["results"] = res;
    fb::save_json(out_path(g, "summary.json").string(), summary);

    if (cfg.emit_svg) {
        fb::SvgChart chart("cumulative regret", "t", "regret");
        std::vector<double> ts, b1;
        for (size_t t = 1; t <= cfg.horizon; ++t) {
            ts.push_back(static_cast<double>(t));
            b1.push_back(thm1_at(d, static_cast<double>(t)));
        }
        chart.add_series("mean regret", ts, mean_cum);
        chart.add_series("thm1 bound", ts, b1);
        fb::save_text(out_path(g, "regret.svg").string(), chart.render());
    }
    std::cout << "simulate: " << cfg.runs << " runs, T=" << cfg.horizon
              << ", final mean cumulative regret " << fb::fmt_double(mean_cum.back())
              << "\n";
    return 0;
}

int cmd_info_ratio(const Globals& g, SimulateConfig cfg) {
    fb::Instance inst = fb::load_instance(cfg.instance_path);
    fb::Precomputed pre(inst);
    fb::Policy policy{fb::policy_from_name(cfg.policy)};
    if (cfg.info_ratio_every == 0) cfg.info_ratio_every = 1;
    fb::Json config = simulate_config_json(cfg);
    config["command"] = "info-ratio";
    std::vector<fb::Trajectory> trajs = run_all(pre, policy, cfg, resolve_threads(g.threads));

    fb::CliqueResult eta = fb::fragility_dimension(inst);
    double lambda = fb::lambda_of(inst);
    double d = static_cast<double>(inst.d);
    double bound_general = lambda > 0.0
                               ? 100.0 / (lambda * lambda) *
                                     std::max<double>(static_cast<double>(eta.size), d)
                               : std::numeric_limits<double>::quiet_NaN();
    double ratio = fb::lipschitz_ratio(inst.beta);
    write_info_ratio_csv(out_path(g, "info_ratio.csv"), config, trajs, bound_general,
                         d * ratio * ratio);
    std::cout << "info-ratio: " << trajs.size() << " runs, every " << cfg.info_ratio_every
              << " steps\n";
    return 0;
}

// ---------------------------------------------------------------- fragility

int cmd_fragility(const Globals& g, const std::string& instance_path) {
    fb::Instance inst = fb::load_instance(instance_path);
    fb::FragilityGraph graph = fb::build_fragility_graph(inst);
    fb::CliqueResult clique = fb::fragility_dimension(inst);
    fb::Json j;
    j["eta"] = clique.size;
    j["witness"] = clique.witness;
    j["exact"] = clique.exact;
    j["graph_edges"] = graph.edge_count();
    std::cout << j.dump(2) << "\n";
    fb::save_json(out_path(g, "fragility.json").string(), j);
    return 0;
}

// ---------------------------------------------------------------- constants

int cmd_constants(const Globals& g, const std::vector<double>& betas, double lmin,
                  double lmax, double lstep, bool emit_svg) {
    fb::Json config;
    config["command"] = "constants";
    config["betas"] = betas;
    config["lambda_min"] = lmin;
    config["lambda_max"] = lmax;
    config["lambda_step"] = lstep;
    fb::CsvWriter csv;
    csv.comment("config " + config.dump());
    csv.header({"beta", "lambda", "z_star", "w_mid", "chi", "xi", "point_one_lambda"});
    fb::SvgChart chart("link-gap constants", "lambda", "value");
    for (double beta : betas) {
        std::vector<double> ls, chis, xis, tenths;
        size_t grid_n =
            lmax < lmin ? 0 : static_cast<size_t>((lmax - lmin) / lstep + 1e-9) + 1;
        for (size_t gi = 0; gi < grid_n; ++gi) {
            double lam = std::min(lmin + static_cast<double>(gi) * lstep, lmax);
            fb::GammaConstants gc = fb::gamma_constants(beta, lam);
            csv.row()
                .cell(beta)
                .cell(lam)
                .cell(gc.z_star)
                .cell(gc.w_mid)
                .cell(gc.chi)
                .cell(gc.xi)
                .cell(0.1 * lam);
            ls.push_back(lam);
            chis.push_back(gc.chi);
            xis.push_back(gc.xi);
            tenths.push_back(0.1 * lam);
        }
        std::string tag = "beta=" + fb::fmt_double(beta);
        chart.add_series("chi " + tag, ls, chis);
        chart.add_series("xi " + tag, ls, xis);
        chart.add_series("0.1*lambda", ls, tenths);
    }
    csv.save(out_path(g, "constants.csv").string());
    if (emit_svg) fb::save_text(out_path(g, "constants.svg").string(), chart.render());
    std::cout << "constants: " << betas.size() << " beta values written\n";
    return 0;
}

// ---------------------------------------------------------------- bounds

int cmd_bounds(const Globals& g, double d, double T, double lambda, double eta, double beta,
               double delta, double gamma_bar) {
    fb::TheoremBounds b = fb::theorem_bounds(d, T, lambda, eta, beta, delta, gamma_bar);
    if (g.format == "json") {
        fb::Json j;
        j["config"] = {{"command", "bounds"}, {"d", d},         {"T", T},
                       {"lambda", lambda},    {"eta", eta},     {"beta", beta},
                       {"delta", delta},      {"gamma_bar", gamma_bar}};
        j["thm1"] = b.thm1;
        j["thm2"] = b.thm2;
        j["prop5"] = b.prop5;
        std::cout << j.dump(2) << "\n";
        fb::save_json(out_path(g, "bounds.json").string(), j);
    } else {
        fb::CsvWriter csv;
        fb::Json config = {{"command", "bounds"}, {"d", d},         {"T", T},
                           {"lambda", lambda},    {"eta", eta},     {"beta", beta},
                           {"delta", delta},      {"gamma_bar", gamma_bar}};
        csv.comment("config " + config.dump());
        csv.header({"thm1", "thm2", "prop5"});
        csv.row().cell(b.thm1).cell(b.thm2).cell(b.prop5);
        std::cout << csv.str();
        csv.save(out_path(g, "bounds.csv").string());
    }
    return 0;
}

// ---------------------------------------------------------------- check

struct CheckConfig {
    std::vector<std::string> suites;  // empty = all
    size_t lemma_cases = 10000;
    size_t turan_cases = 10000;
    size_t capacity_attempts = 20000;
    fb::Prop6Params prop6;
    uint64_t seed = 0;
};

fb::Json check_config_json(const CheckConfig& c) {
    fb::Json j;
    j["command"] = "check";
    j["suites"] = c.suites;
    j["lemma_cases"] = c.lemma_cases;
    j["turan_cases"] = c.turan_cases;
    j["capacity_attempts"] = c.capacity_attempts;
    j["prop6"] = {{"d", c.prop6.d},
                  {"iota", c.prop6.iota},
                  {"n", c.prop6.n},
                  {"t_max", c.prop6.t_max},
                  {"runs", c.prop6.runs}};
    j["seed"] = c.seed;
    return j;
}

void check_config_from_json(const fb::Json& raw, CheckConfig& c) {
    const fb::Json& j = raw.contains("config") ? raw.at("config") : raw;
    if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
    c.lemma_cases = j.value("lemma_cases", c.lemma_cases);
    c.turan_cases = j.value("turan_cases", c.turan_cases);
    c.capacity_attempts = j.value("capacity_attempts", c.capacity_attempts);
    if (j.contains("prop6")) {
        const fb::Json& p = j.at("prop6");
        c.prop6.d = p.value("d", c.prop6.d);
        c.prop6.iota = p.value("iota", c.prop6.iota);
        c.prop6.n = p.value("n", c.prop6.n);
        c.prop6.t_max = p.value("t_max", c.prop6.t_max);
        c.prop6.runs = p.value("runs", c.prop6.runs);
    }
    c.seed = j.value("seed", c.seed);
}

int cmd_check(const Globals& g, const CheckConfig& cfg) {
    auto wants = [&](const std::string& s) {
        if (cfg.suites.empty()) return true;
        for (const auto& w : cfg.suites)
            if (w == s) return true;
        return false;
    };
    unsigned threads = resolve_threads(g.threads);
    std::vector<fb::SuiteReport> reports;
    if (wants("lemmas")) {
        reports.push_back(fb::suite_lemma_marginals(cfg.lemma_cases, cfg.seed));
        reports.push_back(fb::suite_lemma_gbb(cfg.lemma_cases, cfg.seed));
    }
    if (wants("capacity"))
        reports.push_back(fb::suite_capacity(cfg.capacity_attempts, cfg.seed));
    if (wants("turan")) reports.push_back(fb::suite_turan(cfg.turan_cases, cfg.seed));
    if (wants("prop6")) reports.push_back(fb::suite_prop6(cfg.prop6, cfg.seed, threads));

    bool green = true;
    fb::Json out;
    out["config"] = check_config_json(cfg);
    fb::Json suites = fb::Json::array();
    for (const auto& r : reports) {
        suites.push_back(fb::suite_report_json(r));
        green = green && r.green();
        std::cout << r.suite << ": " << r.cases << " cases, " << r.failures << " failures"
                  << (r.green() ? "" : "  <-- RED") << "\n";
    }
    out["suites"] = suites;
    out["green"] = green;
    fb::save_json(out_path(g, "check_report.json").string(), out);
    return green ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"logistic bandit experiments: generation, simulation, fragility, "
                 "information ratios, bound formulas, and verification suites"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "base seed for all randomness");
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_option("--threads", g.threads,
                   "worker threads (0 = FRAGILE_BANDITS_THREADS env or 1)");
    app.add_option("--format", g.format, "output format for bounds")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // gen -------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate an instance file");
    gen->require_subcommand(1);
    gen->fallthrough();
    struct {
        size_t d = 3, n = 8;
        double beta = 1.0, h = 0.6, gamma_factor = -1.0, iota = 0.5, lambda = -1.0;
        size_t max_attempts = 200000;
    } gp;
    auto* gen_sphere = gen->add_subcommand("sphere", "matched uniform points on the sphere");
    gen_sphere->add_option("--d", gp.d, "dimension")->capture_default_str();
    gen_sphere->add_option("--n", gp.n, "number of actions/parameters")->capture_default_str();
    gen_sphere->add_option("--beta", gp.beta, "inverse temperature")->capture_default_str();
    auto* gen_cone = gen->add_subcommand("cone_iota0",
                                         "d=3 rings with vanishing worst-case log-odds");
    gen_cone->add_option("--n", gp.n)->capture_default_str();
    gen_cone->add_option("--height", gp.h, "parameter ring radius")->capture_default_str();
    gen_cone->add_option("--gamma-factor", gp.gamma_factor,
                         "in (lower(N,h), 1); default midpoint");
    gen_cone->add_option("--beta", gp.beta)->capture_default_str();
    auto* gen_exp = gen->add_subcommand("exp_family", "lifted spherical-code family");
    gen_exp->add_option("--d", gp.d)->capture_default_str();
    gen_exp->add_option("--n", gp.n, "target count")->capture_default_str();
    gen_exp->add_option("--iota", gp.iota, "matched log-odds in (0,1)")->capture_default_str();
    gen_exp->add_option("--beta", gp.beta)->capture_default_str();
    gen_exp->add_option("--max-attempts", gp.max_attempts)->capture_default_str();
    auto* gen_hard = gen->add_subcommand("hard", "calibrated linear-early-regret instance");
    gen_hard->add_option("--d", gp.d)->capture_default_str();
    gen_hard->add_option("--n", gp.n)->capture_default_str();
    gen_hard->add_option("--iota", gp.iota)->capture_default_str();
    gen_hard->add_option("--lambda", gp.lambda, "alias for --iota (matched log-odds)");
    gen_hard->add_option("--max-attempts", gp.max_attempts)->capture_default_str();
    auto* gen_pair = gen->add_subcommand("nonmonotone_pair",
                                         "action-superset pair with collapsing fragility");
    gen_pair->add_option("--n", gp.n)->capture_default_str();
    gen_pair->add_option("--height", gp.h)->capture_default_str();
    gen_pair->add_option("--gamma-factor", gp.gamma_factor);
    gen_pair->add_option("--beta", gp.beta)->capture_default_str();

    // simulate / info-ratio --------------------------------------------
    SimulateConfig sim;
    std::string sim_config_path;
    auto* simulate = app.add_subcommand("simulate", "seeded Monte-Carlo regret experiment");
    simulate->add_option("--instance", sim.instance_path, "instance JSON path");
    simulate->add_option("--policy", sim.policy, "thompson|uniform|greedy")
        ->capture_default_str();
    simulate->add_option("--horizon", sim.horizon)->capture_default_str();
    simulate->add_option("--runs", sim.runs)->capture_default_str();
    simulate->add_option("--info-ratio-every", sim.info_ratio_every,
                         "emit exact info-ratio rows every k steps (0=off)");
    simulate->add_flag("--svg", sim.emit_svg, "emit a regret chart");
    simulate->add_option("--config", sim_config_path,
                         "re-run from an embedded config (summary.json or raw config)");

    auto* info = app.add_subcommand("info-ratio", "exact info-ratio along trajectories");
    info->add_option("--instance", sim.instance_path);
    info->add_option("--policy", sim.policy)->capture_default_str();
    info->add_option("--horizon", sim.horizon)->capture_default_str();
    info->add_option("--runs", sim.runs)->capture_default_str();
    info->add_option("--every", sim.info_ratio_every, "sampling stride (default 10)");

    // fragility ---------------------------------------------------------
    std::string frag_instance;
    auto* frag = app.add_subcommand("fragility", "fragility dimension of an instance");
    frag->add_option("--instance", frag_instance)->required();

    // constants -----------------------------------------------------------
    std::vector<double> betas{2.0, 5.0, 10.0};
    double lmin = 0.05, lmax = 1.0, lstep = 0.05;
    bool constants_svg = false;
    auto* constants = app.add_subcommand("constants", "link-gap constants over a grid");
    constants->add_option("--beta", betas, "beta values")->capture_default_str();
    constants->add_option("--lambda-min", lmin)->capture_default_str();
    constants->add_option("--lambda-max", lmax)->capture_default_str();
    constants->add_option("--lambda-step", lstep)->capture_default_str();
    constants->add_flag("--svg", constants_svg);

    // bounds --------------------------------------------------------------
    double bd = 2, bT = 1000, blambda = 1.0, beta_count = 2, bbeta = 1.0, bdelta = 1.0,
           bgamma = 100.0;
    auto* bounds = app.add_subcommand("bounds", "closed-form regret-bound values");
    bounds->add_option("--d", bd)->capture_default_str();
    bounds->add_option("--horizon,--T", bT)->capture_default_str();
    bounds->add_option("--lambda", blambda)->capture_default_str();
    bounds->add_option("--eta", beta_count)->capture_default_str();
    bounds->add_option("--beta", bbeta)->capture_default_str();
    bounds->add_option("--delta", bdelta)->capture_default_str();
    bounds->add_option("--gamma-bar", bgamma)->capture_default_str();

    // check -----------------------------------------------------------------
    CheckConfig chk;
    std::string chk_config_path;
    auto* check = app.add_subcommand("check", "randomized theorem-verification suites");
    check->add_option("--suite", chk.suites, "lemmas|capacity|turan|prop6 (default all)");
    check->add_option("--cases", chk.lemma_cases, "cases per lemma sweep")
        ->capture_default_str();
    check->add_option("--turan-cases", chk.turan_cases)->capture_default_str();
    check->add_option("--capacity-attempts", chk.capacity_attempts)->capture_default_str();
    check->add_option("--prop6-d", chk.prop6.d)->capture_default_str();
    check->add_option("--prop6-iota", chk.prop6.iota)->capture_default_str();
    check->add_option("--prop6-n", chk.prop6.n)->capture_default_str();
    check->add_option("--prop6-tmax", chk.prop6.t_max)->capture_default_str();
    check->add_option("--prop6-runs", chk.prop6.runs)->capture_default_str();
    check->add_option("--config", chk_config_path, "re-run from an embedded config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            if (gen_sphere->parsed()) {
                fb::Instance inst = fb::gen_sphere_matched(gp.d, gp.n, g.seed, gp.beta);
                fb::Json cfg = {{"d", gp.d}, {"n", gp.n}, {"beta", gp.beta}};
                fb::save_json(out_path(g, "instance.json").string(),
                              with_provenance(inst, "sphere", cfg, g.seed));
            } else if (gen_cone->parsed()) {
                double gf = gp.gamma_factor;
                if (gf < 0.0) gf = 0.5 * (fb::detail::cone_gamma_lower(gp.n, gp.h) + 1.0);
                fb::Instance inst = fb::gen_cone_iota0(gp.n, gp.h, gf, gp.beta);
                fb::Json cfg = {{"n", gp.n}, {"h", gp.h}, {"gamma_factor", gf},
                                {"beta", gp.beta}};
                fb::save_json(out_path(g, "instance.json").string(),
                              with_provenance(inst, "cone_iota0", cfg, g.seed));
            } else if (gen_exp->parsed()) {
                fb::ExpFamilyResult r = fb::gen_exponential_family(
                    gp.d, gp.iota, g.seed, gp.n, gp.beta, gp.max_attempts);
                if (!r.target_reached)
                    std::cerr << "warning: packing reached " << r.achieved << " of " << gp.n
                              << " requested vectors\n";
                fb::Json cfg = {{"d", gp.d}, {"n", gp.n},       {"iota", gp.iota},
                                {"beta", gp.beta}, {"achieved", r.achieved}};
                fb::save_json(out_path(g, "instance.json").string(),
                              with_provenance(r.instance, "exp_family", cfg, g.seed));
            } else if (gen_hard->parsed()) {
                double iota = gp.lambda > 0.0 ? gp.lambda : gp.iota;
                fb::ExpFamilyResult r = fb::gen_exponential_family(gp.d, iota, g.seed, gp.n,
                                                                   1.0, gp.max_attempts);
                if (!r.target_reached)
                    throw fb::GenerationFailed(
                        "hard: packing reached only " + std::to_string(r.achieved) + " of " +
                        std::to_string(gp.n) + " vectors; the requested (d, lambda, N) "
                        "combination exceeds the spherical-code capacity at this dimension");
                fb::Instance inst = r.instance;
                inst.beta = fb::calibrate_hard_beta(inst, inst.size());
                // recheck the linear-early-regret premises on the final instance
                fb::Precomputed pre(inst);
                double inv_n = 1.0 / static_cast<double>(inst.size());
                for (size_t i = 0; i < inst.size(); ++i) {
                    if (pre.opt_phi(i) < 1.0 - inv_n - 1e-9)
                        throw fb::GenerationFailed("hard: optimal reward below 1 - 1/N");
                    for (size_t k = 0; k < inst.actions.size(); ++k)
                        if (k != inst.optimal_map[i] && pre.p(k, i) > inv_n + 1e-9)
                            throw fb::GenerationFailed("hard: off-optimal reward above 1/N");
                }
                fb::Json cfg = {{"d", gp.d},
                                {"n", gp.n},
                                {"lambda", iota},
                                {"beta_calibrated", inst.beta}};
                fb::save_json(out_path(g, "instance.json").string(),
                              with_provenance(inst, "hard", cfg, g.seed));
            } else if (gen_pair->parsed()) {
                double gf = gp.gamma_factor;
                if (gf < 0.0) gf = 0.5 * (fb::detail::cone_gamma_lower(gp.n, gp.h) + 1.0);
                fb::NonMonotonePair pair = fb::gen_nonmonotone_pair(gp.n, gp.h, gf, gp.beta);
                fb::Json cfg = {{"n", gp.n}, {"h", gp.h}, {"gamma_factor", gf},
                                {"beta", gp.beta}};
                fb::save_json(out_path(g, "instance.easy.json").string(),
                              with_provenance(pair.easy, "nonmonotone_pair.easy", cfg, g.seed));
                fb::save_json(out_path(g, "instance.hard.json").string(),
                              with_provenance(pair.hard, "nonmonotone_pair.hard", cfg, g.seed));
            }
            return 0;
        }
        if (simulate->parsed()) {
            if (!sim_config_path.empty())
                simulate_config_from_json(fb::load_json(sim_config_path), sim);
            else
                sim.base_seed = g.seed;
            if (sim.instance_path.empty())
                throw fb::DomainError("simulate: --instance or --config required");
            return cmd_simulate(g, sim);
        }
        if (info->parsed()) {
            if (sim.instance_path.empty())
                throw fb::DomainError("info-ratio: --instance required");
            sim.base_seed = g.seed;
            if (sim.info_ratio_every == 0) sim.info_ratio_every = 10;
            return cmd_info_ratio(g, sim);
        }
        if (frag->parsed()) return cmd_fragility(g, frag_instance);
        if (constants->parsed())
            return cmd_constants(g, betas, lmin, lmax, lstep, constants_svg);
        if (bounds->parsed())
            return cmd_bounds(g, bd, bT, blambda, beta_count, bbeta, bdelta, bgamma);
        if (check->parsed()) {
            if (!chk_config_path.empty())
                check_config_from_json(fb::load_json(chk_config_path), chk);
            else
                chk.seed = g.seed;
            return cmd_check(g, chk);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

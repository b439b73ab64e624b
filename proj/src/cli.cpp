#include "lin/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "lin/config.hpp"
#include "lin/error.hpp"
#include "lin/examples.hpp"
#include "lin/holder.hpp"

namespace lin {

using nlohmann::json;

namespace {

json to_json(const ConditionResult& c) {
    return {{"lhs", c.lhs},         {"rhs", c.rhs},           {"margin", c.margin},
            {"tail", c.tail},       {"pass", c.pass},         {"admissible", c.admissible},
            {"divergent", c.divergent}, {"certified", c.certified}, {"note", c.note}};
}

json conditions_json(const std::vector<ConditionResult>& cs) {
    json j = json::object();
    for (const auto& c : cs) j[c.tag] = to_json(c);
    return j;
}

json to_json(const HypothesisReport& h) {
    return {{"discrete", h.discrete},     {"N_value", h.N_value},   {"q_value", h.q_value},
            {"G_integral", h.G_integral}, {"q_eps", h.q_eps},       {"L", h.L},
            {"tail_N", h.tail_N},         {"tail_q", h.tail_q},     {"tau_lo", h.tau_lo},
            {"tau_hi", h.tau_hi},         {"tau_count", h.tau_count}, {"certified", h.certified},
            {"grid_max", h.grid_max},     {"conditions", conditions_json(h.conditions)},
            {"alpha_bounds", h.alpha_bounds}, {"warnings", h.warnings}};
}

json to_json(const SolveInfo& s) {
    return {{"sweeps", s.sweeps},
            {"deltas", s.deltas},
            {"q_value", s.q_value},
            {"N_value", s.N_value},
            {"L", s.L},
            {"tail", s.tail},
            {"node_residual", s.node_residual},
            {"cell_residual", s.cell_residual},
            {"cells_sampled", s.cells_sampled},
            {"error_budget", s.error_budget},
            {"sup_norm", s.sup_norm},
            {"tau_clamped", s.tau_clamped}};
}

json grid_json(const GridSpec& g) {
    const auto ax = [](const Axis& a) { return json{{"lo", a.lo}, {"hi", a.hi}, {"n", a.n}}; };
    json x = json::array(), y = json::array();
    for (const auto& a : g.x) x.push_back(ax(a));
    for (const auto& a : g.y) y.push_back(ax(a));
    return {{"tau", ax(g.tau)}, {"x", x}, {"y", y}};
}

struct Context {
    RunConfig cfg;
    std::filesystem::path out;
    bool csv = false;
    json report;
};

void write_report(Context& ctx) {
    std::filesystem::create_directories(ctx.out);
    std::ofstream os(ctx.out / "report.json");
    os << ctx.report.dump(2) << "\n";
}

// Hoelder and corollary conditions for one (C, alpha).
std::vector<ConditionResult> holder_conditions(const Model& m, const KernelQuadrature& kq, double C, double alpha) {
    std::vector<ConditionResult> out;
    if (!m.kernel.growth) return out;
    const auto run = [&](DeltaKind k, bool y_axis) {
        try {
            out.push_back(y_axis ? holder_y_condition(m, kq, C, alpha, k) : holder_x_condition(m, kq, C, alpha, k));
        } catch (const ValidationError& e) {
            ConditionResult c;
            c.tag = holder_tag(k, m.sys.time);
            c.rhs = C;
            c.admissible = false;
            c.lhs = c.margin = std::nan("");
            c.note = e.what();
            out.push_back(c);
        }
    };
    run(DeltaKind::delta1, false);
    run(DeltaKind::delta2, false);
    if (m.sys.dim_y > 0) {
        run(DeltaKind::sigma, true);
        run(DeltaKind::delta3, true);
    }
    if (m.kernel.dichotomy) {
        const auto cor = dichotomy_corollary_check(*m.kernel.dichotomy, m.sys.M_bound, m.sys.eps_sup(), alpha, C,
                                                   m.sys.M2_bound);
        out.insert(out.end(), cor.conditions.begin(), cor.conditions.end());
    }
    return out;
}

int cmd_check(Context& ctx) {
    const Model m = resolve_model(ctx.cfg);
    const auto b = make_kernel(m, ctx.cfg.numerics);
    const KernelQuadrature kq = b.gkd ? KernelQuadrature(*b.gkd, m, ctx.cfg.numerics)
                                      : KernelQuadrature(*b.gk, m, ctx.cfg.numerics);
    HypothesisReport h = hypothesis_N_q(m, kq);
    json sweep = json::array();
    bool first = true;
    for (double C : ctx.cfg.holder.C) {
        for (double a : ctx.cfg.holder.alpha) {
            const auto cs = holder_conditions(m, kq, C, a);
            if (m.kernel.dichotomy) {
                const auto cor = dichotomy_corollary_check(*m.kernel.dichotomy, m.sys.M_bound, m.sys.eps_sup(), a, C,
                                                           m.sys.M2_bound);
                if (first) h.alpha_bounds = cor.alpha_bounds;
            }
            if (first) h.conditions.insert(h.conditions.end(), cs.begin(), cs.end());
            sweep.push_back({{"C", C}, {"alpha", a}, {"conditions", conditions_json(cs)}});
            first = false;
        }
    }
    ctx.report["hypothesis"] = to_json(h);
    ctx.report["holder_sweep"] = sweep;
    const auto* bound = h.find(m.sys.discrete() ? "boundd" : "bound");
    const bool ok = bound && bound->pass;
    ctx.report["status"] = ok ? "ok" : "hypothesis_failed";
    write_report(ctx);
    std::cout << (m.sys.discrete() ? "boundd" : "bound") << ": q = " << h.q_value << ", N = " << h.N_value
              << (ok ? " (pass)" : " (fail)") << "\n";
    return ok ? kExitOk : kExitHypothesis;
}

ConjugacyPair solve_and_record(Context& ctx, const Model& m, GridSpec& g) {
    g = resolve_grid(m, ctx.cfg);
    ConjugacyPair p = solve_pair(m, g, resolve_solve(ctx.cfg));
    ctx.report["grid"] = grid_json(g);
    ctx.report["h"] = to_json(p.h_info);
    ctx.report["hbar"] = to_json(p.hbar_info);
    const double lim = p.h_info.N_value + ctx.cfg.numerics.tol;
    ctx.report["sup_bound"] = {{"limit", lim},
                               {"h_sup", p.h_info.sup_norm},
                               {"hbar_sup", p.hbar_info.sup_norm},
                               {"pass", p.h_info.sup_norm <= lim && p.hbar_info.sup_norm <= lim}};
    return p;
}

int cmd_solve(Context& ctx) {
    const Model m = resolve_model(ctx.cfg);
    GridSpec g;
    const auto p = solve_and_record(ctx, m, g);
    std::filesystem::create_directories(ctx.out);
    p.h.write_binary((ctx.out / "h_table.bin").string());
    p.hbar.write_binary((ctx.out / "hbar_table.bin").string());
    if (ctx.csv) {
        p.h.write_csv((ctx.out / "h_table.csv").string());
        p.hbar.write_csv((ctx.out / "hbar_table.csv").string());
    }
    ctx.report["status"] = "ok";
    write_report(ctx);
    std::cout << "h: " << p.h_info.sweeps << " sweeps, budget " << p.h_info.error_budget
              << "; hbar budget " << p.hbar_info.error_budget << "\n";
    return kExitOk;
}

int cmd_verify(Context& ctx) {
    const Model m = resolve_model(ctx.cfg);
    GridSpec g;
    const auto p = solve_and_record(ctx, m, g);
    const auto inv = verify_inverse(p, ctx.cfg.verify.samples, ctx.cfg.seed);
    const auto map = verify_mapping(p, ctx.cfg.verify.samples, ctx.cfg.verify.horizon, ctx.cfg.seed + 1);
    ctx.report["inverse"] = {{"samples", inv.samples},       {"clamped", inv.clamped},
                             {"max_defect", inv.max_defect}, {"max_defect_all", inv.max_defect_all},
                             {"budget", inv.budget},         {"lip_h", inv.lip_h},
                             {"lip_hbar", inv.lip_hbar},     {"pass", inv.pass()}};
    ctx.report["mapping"] = {{"samples", map.samples},
                             {"clamped", map.clamped},
                             {"horizon", map.horizon},
                             {"max_defect_h", map.max_defect_h},
                             {"max_defect_hbar", map.max_defect_hbar},
                             {"max_budget_h", map.max_budget_h},
                             {"max_budget_hbar", map.max_budget_hbar},
                             {"max_excess", map.max_excess},
                             {"max_ode_error", map.max_ode_error},
                             {"pass", map.pass()}};
    if (ctx.csv) {
        std::filesystem::create_directories(ctx.out);
        inv.write_csv((ctx.out / "inverse_samples.csv").string());
    }
    ctx.report["status"] = "ok";
    write_report(ctx);
    std::cout << "inverse: " << inv.max_defect << " (budget " << inv.budget << "); mapping: "
              << std::max(map.max_defect_h, map.max_defect_hbar) << " (excess " << map.max_excess << ")\n";
    return kExitOk;
}

int cmd_holder(Context& ctx) {
    const Model m = resolve_model(ctx.cfg);
    const auto& hc = ctx.cfg.holder;
    json env = json::object();
    std::vector<DeltaKind> kinds{DeltaKind::delta2};
    if (m.sys.dim_y > 0) {
        kinds.push_back(DeltaKind::delta3);
        kinds.push_back(DeltaKind::sigma);
    }
    for (DeltaKind k : kinds) {
        try {
            const auto e = envelope_empirical_check(m, k, hc.pairs, hc.horizon, ctx.cfg.seed, ctx.cfg.numerics.h_ode);
            env[std::string(delta_kind_name(k))] = {{"max_ratio", e.max_ratio}, {"pairs", e.pairs},
                                                    {"horizon", e.horizon},     {"worst_s", e.worst_s},
                                                    {"worst_t", e.worst_t}};
        } catch (const ValidationError& e) {
            env[std::string(delta_kind_name(k))] = {{"skipped", e.what()}};
        }
    }
    ctx.report["envelopes"] = env;

    GridSpec g;
    const auto p = solve_and_record(ctx, m, g);
    const auto b = make_kernel(m, ctx.cfg.numerics);
    const KernelQuadrature kq = b.gkd ? KernelQuadrature(*b.gkd, m, ctx.cfg.numerics)
                                      : KernelQuadrature(*b.gk, m, ctx.cfg.numerics);
    json runs = json::array();
    bool wrote_main = false;
    for (double C : hc.C) {
        for (double a : hc.alpha) {
            const auto cs = holder_conditions(m, kq, C, a);
            std::vector<std::pair<HolderAxis, TableKind>> jobs{{HolderAxis::x, TableKind::h},
                                                               {HolderAxis::x, TableKind::hbar}};
            if (m.sys.dim_y > 0) {
                jobs.push_back({HolderAxis::y, TableKind::h});
                jobs.push_back({HolderAxis::y, TableKind::hbar});
            }
            for (const auto& [axis, table] : jobs) {
                const auto rep = empirical_holder(p, axis, table, C, a, hc.samples, ctx.cfg.seed);
                // Condition guaranteeing this (axis, table) combination.
                const DeltaKind k = axis == HolderAxis::x ? (table == TableKind::h ? DeltaKind::delta1 : DeltaKind::delta2)
                                                          : (table == TableKind::h ? DeltaKind::sigma : DeltaKind::delta3);
                const std::string tag = holder_tag(k, m.sys.time);
                json cond = nullptr;
                for (const auto& c : cs) {
                    if (c.tag == tag) cond = to_json(c);
                }
                runs.push_back({{"C", C},
                                {"alpha", a},
                                {"axis", holder_axis_name(axis)},
                                {"table", table_kind_name(table)},
                                {"condition_tag", tag},
                                {"condition", cond},
                                {"samples", rep.samples},
                                {"violations", rep.violations},
                                {"clamped_excluded", rep.clamped_excluded},
                                {"max_ratio", rep.max_ratio},
                                {"slack", rep.slack},
                                {"min_separation", rep.min_separation},
                                {"fit_exponent", rep.fit_degenerate ? json(nullptr) : json(rep.fit_exponent)},
                                {"fit_constant", rep.fit_degenerate ? json(nullptr) : json(rep.fit_constant)},
                                {"fit_degenerate", rep.fit_degenerate},
                                {"c_prime", rep.c_prime}});
                if (ctx.csv) {
                    std::filesystem::create_directories(ctx.out);
                    if (!wrote_main) {
                        rep.write_csv((ctx.out / "holder_pairs.csv").string());
                        wrote_main = true;
                    }
                    rep.write_csv((ctx.out / ("holder_pairs_" + holder_axis_name(axis) + "_" + table_kind_name(table) +
                                              ".csv"))
                                      .string());
                }
            }
        }
    }
    ctx.report["empirical"] = runs;
    ctx.report["status"] = "ok";
    write_report(ctx);
    std::cout << "holder: " << runs.size() << " empirical runs\n";
    return kExitOk;
}

int cmd_example(Context& ctx, const std::string& name) {
    const auto pkg = load_example(name);
    const auto rep = run_example(pkg, ctx.cfg.numerics);
    json checks = json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"tag", c.tag},
                          {"expected", c.expected ? "pass" : "fail"},
                          {"observed", c.observed ? "pass" : "fail"},
                          {"value", c.value},
                          {"ok", c.ok()},
                          {"note", c.note}});
        std::cout << c.tag << ": " << (c.observed ? "pass" : "fail") << (c.ok() ? "" : "  (UNEXPECTED)") << "\n";
    }
    ctx.report["example"] = {{"name", pkg.name}, {"notes", pkg.notes}, {"checks", checks}, {"ok", rep.ok()}};
    ctx.report["hypothesis"] = to_json(rep.hypothesis);
    ctx.report["status"] = rep.ok() ? "ok" : "pattern_mismatch";
    write_report(ctx);
    return rep.ok() ? kExitOk : kExitHypothesis;
}

int cmd_oracle(Context& ctx) {
    const Model m = resolve_model(ctx.cfg);
    if (!m.sys.discrete()) throw ConfigError("oracle needs a discrete system");
    const GridSpec g = resolve_grid(m, ctx.cfg);
    SolveInfo info;
    const FunctionTable h = solve_h_discrete(m, g, resolve_solve(ctx.cfg), &info);
    std::mt19937_64 rng(ctx.cfg.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    json probes = json::array();
    std::size_t excess = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < ctx.cfg.oracle.probes; ++i) {
        const int ti = static_cast<int>(u01(rng) * g.tau.n) % g.tau.n;
        const long n = std::lround(g.tau.node(ti));
        Vec xi(m.sys.dim_x), eta(m.sys.dim_y);
        for (int k = 0; k < m.sys.dim_x; ++k) xi[k] = g.x[k].lo + (g.x[k].hi - g.x[k].lo) * u01(rng);
        for (int k = 0; k < m.sys.dim_y; ++k) eta[k] = g.y[k].lo + (g.y[k].hi - g.y[k].lo) * u01(rng);
        const auto o = brute_force_h_discrete(m, n, xi, eta, ctx.cfg.oracle.K, static_cast<long>(info.L),
                                              info.q_value, info.N_value);
        const double gap = (h.eval(static_cast<double>(n), xi, eta) - o.value).norm();
        const double allowed = o.radius + info.error_budget;
        if (gap > allowed) ++excess;
        worst = std::max(worst, gap - allowed);
        probes.push_back({{"n", n}, {"gap", gap}, {"allowed", allowed}, {"radius", o.radius}, {"K", o.K}});
    }
    ctx.report["grid"] = grid_json(g);
    ctx.report["h"] = to_json(info);
    ctx.report["oracle"] = {{"probes", probes}, {"excess_count", excess}, {"max_excess", worst}};
    ctx.report["status"] = "ok";
    write_report(ctx);
    std::cout << "oracle: " << excess << " probes beyond the certified radius\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Linearizing conjugacies of nonautonomous systems: hypothesis checks, solvers, verification"};
    std::string config_path, out_dir, system;
    std::vector<std::string> params;
    std::uint64_t seed = 0;
    double tol = 0.0, window = 0.0;
    bool csv = false;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--system", system, "catalog system (when no config is given)");
    app.add_option("--param", params, "catalog parameter name=value (repeatable)");
    app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    auto* tol_opt = app.add_option("--tol", tol, "tolerance");
    auto* win_opt = app.add_option("--window", window, "integration window T_max");
    app.add_flag("--csv", csv, "also write CSV tables");
    app.require_subcommand(1);
    auto* check = app.add_subcommand("check", "hypothesis report");
    auto* solve = app.add_subcommand("solve", "solve h and hbar tables");
    auto* verify = app.add_subcommand("verify", "inverse and solution-mapping defects");
    auto* holder = app.add_subcommand("holder", "envelope checks and empirical Hoelder reports");
    auto* example = app.add_subcommand("example", "run an example package's expected checks");
    std::string example_name;
    example->add_option("name", example_name, "example name")->required();
    auto* oracle = app.add_subcommand("oracle", "discrete brute-force comparison");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    Context ctx;
    try {
        if (!config_path.empty()) {
            ctx.cfg = load_config(config_path);
        } else {
            json j;
            if (example->parsed()) {
                j["system"] = {{"example", example_name}};
            } else {
                if (system.empty()) throw ConfigError("give --config or --system");
                j["system"] = {{"name", system}};
                json p = json::object();
                for (const auto& kv : params) {
                    const auto eq = kv.find('=');
                    if (eq == std::string::npos) throw ConfigError("--param expects name=value");
                    try {
                        p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
                    } catch (const std::exception&) {
                        throw ConfigError("bad number in --param " + kv);
                    }
                }
                j["system"]["params"] = p;
            }
            ctx.cfg = parse_config(j);
        }
        if (*seed_opt) ctx.cfg.seed = seed;
        if (*tol_opt) {
            if (!(tol > 0.0)) throw ConfigError("--tol must be positive");
            ctx.cfg.numerics.tol = tol;
        }
        if (*win_opt) {
            if (!(window > 0.0)) throw ConfigError("--window must be positive");
            ctx.cfg.numerics.window = window;
        }
        if (!out_dir.empty()) ctx.cfg.output = out_dir;
        ctx.out = ctx.cfg.output;
        ctx.csv = csv;
        ctx.report["config"] = to_json(ctx.cfg);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    const auto fail = [&](const char* status, const std::exception& e, int code) {
        std::cerr << status << ": " << e.what() << "\n";
        ctx.report["status"] = status;
        ctx.report["error"] = e.what();
        try {
            write_report(ctx);
        } catch (const std::exception&) {
        }
        return code;
    };
    try {
        ctx.report["command"] = check->parsed()     ? "check"
                                : solve->parsed()   ? "solve"
                                : verify->parsed()  ? "verify"
                                : holder->parsed()  ? "holder"
                                : example->parsed() ? "example"
                                                    : "oracle";
        if (check->parsed()) return cmd_check(ctx);
        if (solve->parsed()) return cmd_solve(ctx);
        if (verify->parsed()) return cmd_verify(ctx);
        if (holder->parsed()) return cmd_holder(ctx);
        if (example->parsed()) return cmd_example(ctx, example_name);
        if (oracle->parsed()) return cmd_oracle(ctx);
    } catch (const HypothesisError& e) {
        return fail("hypothesis_failed", e, kExitHypothesis);
    } catch (const ConvergenceError& e) {
        ctx.report["history"] = e.history();
        return fail("not_converged", e, kExitConvergence);
    } catch (const ConfigError& e) {
        return fail("config_invalid", e, kExitConfig);
    } catch (const CatalogError& e) {
        return fail("config_invalid", e, kExitConfig);
    } catch (const Error& e) {
        return fail("error", e, kExitError);
    }
    return kExitError;
}

}  // namespace lin

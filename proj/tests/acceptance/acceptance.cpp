// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lin/conjugacy.hpp"
#include "lin/error.hpp"
#include "lin/examples.hpp"
#include "lin/holder.hpp"

using namespace lin;

namespace {

constexpr double kHypTol = 1e-6;
constexpr double kHypSeconds = 1.0;
constexpr double kRatioSlack = 0.05;
constexpr int kExtraSweeps = 3;
constexpr double kBudgetCap = 1e-3;
constexpr std::size_t kVerifySamples = 500;
constexpr double kHorizon = 2.0;
constexpr std::size_t kProbes = 50;
constexpr int kOracleK = 40;
constexpr double kMarginTol = 1e-12;
constexpr double kEnvelopeSlack = 1e-3;
constexpr std::size_t kEnvelopePairs = 200;
constexpr double kEnvelopeHorizon = 3.0;
constexpr std::size_t kHolderPairs = 1000;
constexpr double kPeriodTol = 1e-3;
constexpr double kRk4Ratio = 8.0;

struct Line {
    bool pass;
    std::string text;
};

std::vector<Line> lines;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    lines.push_back({pass, std::to_string(id) + " " + name + ": " + detail});
    std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
}

void guarded(int id, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SolveConfig solve_config(double h_ode = 1e-3, int stride = 10) {
    SolveConfig c;
    c.quad.h_ode = h_ode;
    c.quad.stride = stride;
    return c;
}

// Shared pairs, solved once.
struct Runs {
    ConjugacyPair scalar;    // scalar_tanh eps = 0.1, fine x grid
    ConjugacyPair saddle;    // saddle_tanh eps = 0.01, kappa = beta = 0.5
    ConjugacyPair discrete;  // d_scalar_tanh, fine x grid
};

Runs& runs() {
    static Runs r = [] {
        Runs out;
        const Model s = build_model("scalar_tanh", {{"eps", 0.1}});
        out.scalar = solve_pair(s, box_grid(s, 2049, 2), solve_config());
        Model sd = build_model("saddle_tanh", {{"eps", 0.01}, {"kappa", 0.5}, {"beta", 0.5}});
        sd.sys.box.x_half = 1.0;
        sd.sys.box.y_half = 1.0;
        out.saddle = solve_pair(sd, box_grid(sd, 31, 21), solve_config(0.01, 10));
        const Model d = build_model("d_scalar_tanh");
        out.discrete = solve_pair(d, box_grid(d, 32769, 2), solve_config());
        return out;
    }();
    return r;
}

void criterion1() {
    const Model m = build_model("scalar_tanh", {{"eps", 0.1}});
    const auto t0 = std::chrono::steady_clock::now();
    const auto h = hypothesis_N_q(m, QuadConfig{});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double dN = std::abs(h.N_value - 0.1), dq = std::abs(h.q_value - 0.1);
    report(1, "hypothesis arithmetic", dN <= kHypTol && dq <= kHypTol && secs < kHypSeconds,
           fmt("N=%.9f q=%.9f (closed form 0.1, tol %.0e), %.3f s (< %.0f s)", h.N_value, h.q_value, kHypTol,
               secs, kHypSeconds));
}

void criterion2() {
    const Model m = build_model("scalar_tanh", {{"eps", 0.1}});
    auto cfg = solve_config();
    cfg.quad.tol = 1e-5;
    SolveInfo info;
    solve_h(m, box_grid(m, 41, 2), cfg, &info);
    double worst = 0.0;
    for (std::size_t k = 1; k < info.deltas.size(); ++k) worst = std::max(worst, info.deltas[k] / info.deltas[k - 1]);
    const double q = info.q_value;
    const int bound =
        static_cast<int>(std::ceil(std::log(cfg.quad.tol * (1.0 - q) / info.N_value) / std::log(q))) + kExtraSweeps;
    report(2, "contraction", worst <= q + kRatioSlack && info.sweeps <= bound,
           fmt("max sweep ratio %.4f (<= q + %.2f = %.4f), %d sweeps (<= %d)", worst, kRatioSlack, q + kRatioSlack,
               info.sweeps, bound));
}

void criterion3() {
    double worst = -1.0;
    std::string worst_name;
    int count = 0;
    const auto check = [&](const std::string& name, const ConjugacyPair& p) {
        const double lim = p.h_info.N_value + p.config.quad.tol;
        const double r = std::max(p.h.sup_norm(), p.hbar.sup_norm()) / lim;
        if (r > worst) {
            worst = r;
            worst_name = name;
        }
        ++count;
    };
    for (const auto& e : catalog()) {
        const Model m = build_model(e.name);
        const bool disc = e.time == TimeKind::discrete;
        const Axis tau = disc ? Axis{-4.0, 4.0, 9} : Axis{-5.0, 5.0, 11};
        const int nx = m.sys.dim_x > 2 ? 7 : 17;
        check(e.name, solve_pair(m, box_grid(m, nx, 3, tau), disc ? solve_config() : solve_config(0.01, 2)));
    }
    check("scalar_tanh (fine)", runs().scalar);
    check("saddle_tanh (coupled)", runs().saddle);
    check("d_scalar_tanh (fine)", runs().discrete);
    report(3, "sup bound", worst <= 1.0,
           fmt("%d runs, max sup/(N + tol) = %.6f at %s (<= 1)", count, worst, worst_name.c_str()));
}

void criterion4() {
    bool ok = true;
    std::string detail;
    for (const auto* p : {&runs().scalar, &runs().saddle}) {
        const auto r = verify_inverse(*p, kVerifySamples, 11);
        ok = ok && r.pass() && r.budget <= kBudgetCap;
        detail += fmt("%s defect %.3e <= budget %.3e (cap %.0e, %zu clamped); ", p->model.sys.name.c_str(),
                      r.max_defect, r.budget, kBudgetCap, r.clamped);
    }
    report(4, "inverse identity", ok, detail);
}

void criterion5() {
    bool ok = true;
    std::string detail;
    for (const auto* p : {&runs().scalar, &runs().discrete}) {
        const auto r = verify_mapping(*p, kVerifySamples, kHorizon, 12);
        const bool ode_ok = p->discrete() ? r.max_ode_error == 0.0 : true;
        ok = ok && r.pass() && r.max_budget_h <= kBudgetCap && r.max_budget_hbar <= kBudgetCap && ode_ok;
        detail += fmt("%s H %.3e/%.3e, Hbar %.3e/%.3e (defect/budget, cap %.0e), excess %.2e, ode %.1e; ",
                      p->model.sys.name.c_str(), r.max_defect_h, r.max_budget_h, r.max_defect_hbar,
                      r.max_budget_hbar, kBudgetCap, r.max_excess, r.max_ode_error);
    }
    report(5, "solution mapping", ok, detail);
}

void criterion6() {
    std::size_t excess = 0, probes = 0;
    double worst = -1e300;
    std::string detail;
    const auto run = [&](const Model& m, const GridSpec& g) {
        SolveInfo info;
        const auto h = solve_h_discrete(m, g, solve_config(), &info);
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (std::size_t i = 0; i < kProbes; ++i) {
            Vec xi(m.sys.dim_x), eta(m.sys.dim_y);
            for (int k = 0; k < m.sys.dim_x; ++k) xi[k] = g.x[k].lo + (g.x[k].hi - g.x[k].lo) * u(rng);
            for (int k = 0; k < m.sys.dim_y; ++k) eta[k] = g.y[k].lo + (g.y[k].hi - g.y[k].lo) * u(rng);
            const auto o = brute_force_h_discrete(m, 0, xi, eta, kOracleK, static_cast<long>(info.L), info.q_value,
                                                  info.N_value);
            const double gap = (h.eval(0.0, xi, eta) - o.value).norm();
            const double allowed = o.radius + info.error_budget;
            worst = std::max(worst, gap / allowed);
            if (gap > allowed) ++excess;
            ++probes;
        }
        detail += fmt("%s e_h %.2e; ", m.sys.name.c_str(), info.error_budget);
    };
    run(runs().discrete.model, GridSpec{runs().discrete.h.tau_axis(), {runs().discrete.h.x_axis(0)},
                                        {runs().discrete.h.y_axis(0)}});
    const Model sd = build_model("d_saddle_tanh", {{"eps", 0.05}, {"kappa", 0.5}});
    run(sd, box_grid(sd, 201, 41));
    report(6, "oracle equivalence", excess == 0,
           fmt("%zu probes, %zu beyond oracle radius + interpolation budget, max gap/allowed %.3f; %s", probes,
               excess, worst, detail.c_str()));
}

void criterion7() {
    const DichotomyData unit{};
    const auto a = dichotomy_corollary_check(unit, 1.0, 0.4, 0.5, 1.0);
    const auto b = dichotomy_corollary_check(unit, 1.0, 0.6, 0.5, 1.0);
    const bool ep = a.find("epcon")->lhs == 0.8 && a.find("epcon")->pass && b.find("epcon")->lhs == 1.2 &&
                    !b.find("epcon")->pass;
    const Model m = build_model("scalar_tanh", {{"eps", 0.01}});
    QuadConfig q;
    q.stride = 1;
    q.window = 80.0;
    q.L = 64.0;
    const auto k = make_kernel(m, q);
    const KernelQuadrature kq(*k.gk, m, q);
    const auto c1 = holder_x_condition(m, kq, 1.0, 0.5, DeltaKind::delta1);
    const double dev = std::abs(c1.margin - 0.2);
    report(7, "corollary arithmetic", ep && dev <= kMarginTol,
           fmt("epcon LHS %.17g / %.17g (exact 0.8 / 1.2), c1 margin %.15f (|dev| %.1e <= %.0e)",
               a.find("epcon")->lhs, b.find("epcon")->lhs, c1.margin, dev, kMarginTol));
}

void criterion8() {
    double worst = 0.0;
    std::string where;
    int runs_done = 0;
    const auto check = [&](const Model& m, double h_ode) {
        for (DeltaKind k : {DeltaKind::delta2, DeltaKind::delta3, DeltaKind::sigma}) {
            const auto e = envelope_empirical_check(m, k, kEnvelopePairs, kEnvelopeHorizon, 31, h_ode);
            ++runs_done;
            if (e.max_ratio > worst) {
                worst = e.max_ratio;
                where = m.sys.name + "/" + std::string(delta_kind_name(k));
            }
        }
    };
    check(build_model("saddle_tanh", {{"eps", 0.1}, {"kappa", 0.5}, {"beta", 0.5}}), 1e-3);
    check(build_model("scalar_tanh", {{"eps", 0.1}}), 1e-3);
    check(build_model("d_saddle_tanh", {{"eps", 0.05}, {"kappa", 0.5}, {"b", 1.5}}), 1e-3);
    report(8, "Gronwall envelopes", worst <= 1.0 + kEnvelopeSlack,
           fmt("%d scenarios x %zu pairs, horizon %.0f: max ratio %.6f at %s (<= 1 + %.0e)", runs_done,
               kEnvelopePairs, kEnvelopeHorizon, worst, where.c_str(), kEnvelopeSlack));
}

void criterion9() {
    const Model m = build_model("scalar_tanh", {{"eps", 0.01}});
    const auto scalar = solve_pair(m, box_grid(m, 1025, 9), solve_config());
    std::size_t tested = 0, skipped = 0, violations = 0;
    const auto sweep = [&](const ConjugacyPair& p) {
        const auto k = make_kernel(p.model, p.config.quad);
        const KernelQuadrature kq(*k.gk, p.model, p.config.quad);
        for (double C : {0.5, 1.0, 2.0}) {
            for (double alpha : {0.25, 0.5, 0.75}) {
                const std::pair<DeltaKind, std::pair<HolderAxis, TableKind>> jobs[] = {
                    {DeltaKind::delta1, {HolderAxis::x, TableKind::h}},
                    {DeltaKind::delta2, {HolderAxis::x, TableKind::hbar}},
                    {DeltaKind::sigma, {HolderAxis::y, TableKind::h}},
                    {DeltaKind::delta3, {HolderAxis::y, TableKind::hbar}}};
                for (const auto& [kind, job] : jobs) {
                    const bool y = job.first == HolderAxis::y;
                    const auto c = y ? holder_y_condition(p.model, kq, C, alpha, kind)
                                     : holder_x_condition(p.model, kq, C, alpha, kind);
                    if (!(c.margin >= 0.0)) {
                        ++skipped;
                        continue;
                    }
                    const auto r = empirical_holder(p, job.first, job.second, C, alpha, kHolderPairs, 41);
                    ++tested;
                    violations += r.violations;
                }
            }
        }
    };
    sweep(scalar);
    sweep(runs().saddle);
    report(9, "Hoelder", tested > 0 && violations == 0,
           fmt("%zu (C, alpha, axis, table) runs with margin >= 0 at %zu pairs each: %zu violations; %zu runs with "
               "negative margin not tested",
               tested, kHolderPairs, violations, skipped));
}

void criterion10() {
    bool ok = true;
    std::string detail;
    for (const auto& name : example_names()) {
        const auto rep = run_example(load_example(name), QuadConfig{});
        ok = ok && rep.ok();
        detail += name.substr(0, 2) + (rep.ok() ? " ok" : " MISMATCH");
        if (const auto* k = rep.find("kernel_bound")) detail += fmt(" (max |G|/(1+n^2) = %.6f)", k->value);
        if (const auto* g = rep.find("adm_gamma")) detail += fmt(" (adm gamma %.4f)", g->value);
        detail += "; ";
    }
    // Autonomous: any shift is a period.
    const Model a = build_model("scalar_tanh", {{"eps", 0.1}});
    GridSpec ga = box_grid(a, 41, 2);
    ga.tau = Axis{-3.0, 3.0, 13};
    const auto ha = solve_h(a, ga, solve_config());
    const double da = periodicity_defect(ha, 1.0, -3.0);
    const Model p = build_model("periodic_tanh", {{"eps", 0.1}});
    const double T0 = *p.sys.period;
    const auto pp = solve_pair(p, box_grid(p, 21, 1, Axis{-3.0 * T0, T0, 257}), solve_config(0.01, 2));
    const double dp = std::max(periodicity_defect(pp.h, T0, -T0), periodicity_defect(pp.hbar, T0, -T0));
    ok = ok && da <= kPeriodTol && dp <= kPeriodTol;
    detail += fmt("periodicity defect autonomous %.2e, periodic %.2e (<= %.0e)", da, dp, kPeriodTol);
    report(10, "worked examples", ok, detail);
}

void criterion11() {
    const Model m = build_model("scalar_tanh");
    const auto err = [&](double h) {
        return std::abs(EvolutionFamily(m.sys.linear_part, 1, h, 2.0)(1.0, 0.0)(0, 0) - std::exp(-1.0));
    };
    const double e1 = err(0.1), e2 = err(0.05);
    report(11, "RK4 order", e1 / e2 >= kRk4Ratio,
           fmt("|T(1,0) - e^-1| = %.3e (h = 0.1), %.3e (h = 0.05): ratio %.2f (>= %.0f)", e1, e2, e1 / e2,
               kRk4Ratio));
}

}  // namespace

int main() {
    guarded(1, "hypothesis arithmetic", criterion1);
    guarded(2, "contraction", criterion2);
    guarded(3, "sup bound", criterion3);
    guarded(4, "inverse identity", criterion4);
    guarded(5, "solution mapping", criterion5);
    guarded(6, "oracle equivalence", criterion6);
    guarded(7, "corollary arithmetic", criterion7);
    guarded(8, "Gronwall envelopes", criterion8);
    guarded(9, "Hoelder", criterion9);
    guarded(10, "worked examples", criterion10);
    guarded(11, "RK4 order", criterion11);
    std::size_t failed = 0;
    for (const auto& l : lines) failed += l.pass ? 0 : 1;
    std::printf("%zu/%zu criteria passed\n", lines.size() - failed, lines.size());
    return failed == 0 ? 0 : 1;
}

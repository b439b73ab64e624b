#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "lin/conjugacy.hpp"
#include "lin/error.hpp"

namespace lin {

namespace {

// Largest eigenvalue of the symmetric part: growth rate of |x| under x' = Ax.
double log_norm(const Mat& a) {
    const Mat s = 0.5 * (a + a.transpose());
    if (s.rows() == 1) return s(0, 0);
    Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

struct Sampler {
    const FunctionTable& tab;
    std::mt19937_64 rng;

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

    // Time in [lo, hi_limit]; integer for discrete tables.
    double time(double hi_limit) {
        const Axis& a = tab.tau_axis();
        if (a.n == 1) return a.lo;
        const double hi = std::min(a.node(a.n - 1), hi_limit);
        if (tab.discrete()) {
            std::uniform_int_distribution<long> pick(std::lround(a.lo), std::lround(hi));
            return static_cast<double>(pick(rng));
        }
        return uniform(a.lo, hi);
    }

    Vec box(bool xs, double shrink) {
        const int n = xs ? tab.dim_x() : tab.dim_y();
        Vec v(n);
        for (int i = 0; i < n; ++i) {
            const Axis& a = xs ? tab.x_axis(i) : tab.y_axis(i);
            const double c = 0.5 * (a.lo + a.hi), r = 0.5 * (a.hi - a.lo) * shrink;
            v[i] = a.n == 1 ? a.lo : uniform(c - r, c + r);
        }
        return v;
    }
};

}  // namespace

void InverseReport::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ValidationError("cannot write " + path);
    std::fprintf(f, "t");
    const int dx = rows.empty() ? 0 : static_cast<int>(rows[0].x.size());
    const int dy = rows.empty() ? 0 : static_cast<int>(rows[0].y.size());
    for (int i = 0; i < dx; ++i) std::fprintf(f, ",x%d", i + 1);
    for (int j = 0; j < dy; ++j) std::fprintf(f, ",y%d", j + 1);
    std::fprintf(f, ",defect_h_hbar,defect_hbar_h,clamped_flag\n");
    for (const auto& r : rows) {
        std::fprintf(f, "%.17g", r.t);
        for (int i = 0; i < dx; ++i) std::fprintf(f, ",%.17g", r.x[i]);
        for (int j = 0; j < dy; ++j) std::fprintf(f, ",%.17g", r.y[j]);
        std::fprintf(f, ",%.17g,%.17g,%d\n", r.defect_h_hbar, r.defect_hbar_h, r.clamped ? 1 : 0);
    }
    std::fclose(f);
}

InverseReport verify_inverse(const ConjugacyPair& p, std::size_t samples, std::uint64_t seed) {
    InverseReport rep;
    rep.samples = samples;
    rep.lip_h = p.h.lipschitz_xy();
    rep.lip_hbar = p.hbar.lipschitz_xy();
    const double eh = p.h_info.error_budget, eb = p.hbar_info.error_budget;
    rep.budget = std::max(eb * (1.0 + rep.lip_h) + eh, eh * (1.0 + rep.lip_hbar) + eb);
    Sampler smp{p.h, std::mt19937_64(seed)};
    for (std::size_t i = 0; i < samples; ++i) {
        InverseSample s;
        s.t = smp.time(std::numeric_limits<double>::infinity());
        s.x = smp.box(true, 1.0);
        s.y = smp.box(false, 1.0);
        bool c1 = false, c2 = false, c3 = false, c4 = false;
        const Vec z = s.x + p.hbar.eval(s.t, s.x, s.y, &c1);
        const Vec back = z + p.h.eval(s.t, z, s.y, &c2);
        const Vec w = s.x + p.h.eval(s.t, s.x, s.y, &c3);
        const Vec back2 = w + p.hbar.eval(s.t, w, s.y, &c4);
        s.defect_h_hbar = (back - s.x).norm();
        s.defect_hbar_h = (back2 - s.x).norm();
        s.clamped = c1 || c2 || c3 || c4;
        const double d = std::max(s.defect_h_hbar, s.defect_hbar_h);
        rep.max_defect_all = std::max(rep.max_defect_all, d);
        if (s.clamped) {
            ++rep.clamped;
        } else {
            rep.max_defect = std::max(rep.max_defect, d);
        }
        rep.rows.push_back(std::move(s));
    }
    return rep;
}

MappingReport verify_mapping(const ConjugacyPair& p, std::size_t samples, double horizon, std::uint64_t seed) {
    const auto& sys = p.model.sys;
    MappingReport rep;
    rep.samples = samples;
    rep.horizon = horizon;
    rep.max_excess = -std::numeric_limits<double>::infinity();
    if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
    const double eh = p.h_info.error_budget, eb = p.hbar_info.error_budget;
    Sampler smp{p.h, std::mt19937_64(seed)};
    const OdeConfig ode{p.config.quad.h_ode, p.config.quad.window};
    const OdeConfig half{0.5 * p.config.quad.h_ode, p.config.quad.window};
    const bool disc = sys.discrete();
    const long steps = disc ? std::lround(horizon) : 0;
    if (disc && steps < 1) throw ValidationError("discrete horizon must be at least one step");

    for (std::size_t i = 0; i < samples; ++i) {
        const double tau = smp.time(p.h.tau_axis().node(p.h.tau_axis().n - 1) - horizon);
        const double end = tau + (disc ? static_cast<double>(steps) : horizon);
        const Vec xi = smp.box(true, 0.5);
        const Vec eta = smp.box(false, 0.5);

        double amp_lin = 1.0, amp_non = 1.0, ode_err = 0.0;
        // Linear and nonlinear flows from two starts each.
        bool cl = false, c = false;
        const Vec h0 = p.h.eval(tau, xi, eta, &c);
        cl = cl || c;
        const Vec hb0 = p.hbar.eval(tau, xi, eta, &c);
        cl = cl || c;
        FlowState lin_a, non_a, lin_b, non_b;
        if (disc) {
            const long n = std::lround(tau), mend = n + steps;
            lin_a = orbit(sys, n, {xi, eta}, mend, false);
            non_a = orbit(sys, n, {xi + h0, eta}, mend, true);
            non_b = orbit(sys, n, {xi, eta}, mend, true);
            lin_b = orbit(sys, n, {xi + hb0, eta}, mend, false);
            Mat prod = Mat::Identity(sys.dim_x, sys.dim_x);
            for (long k = n; k < mend; ++k) {
                const double kd = static_cast<double>(k);
                prod = sys.A(kd) * prod;
                amp_non *= op_norm(sys.A(kd)) + sys.gamma(kd);
            }
            amp_lin = op_norm(prod);
        } else {
            lin_a = solve_linear(sys, ode, tau, xi, eta, end);
            non_a = solve_coupled(sys, ode, tau, xi + h0, eta, end);
            non_b = solve_coupled(sys, ode, tau, xi, eta, end);
            lin_b = solve_linear(sys, ode, tau, xi + hb0, eta, end);
            const FlowState la = solve_linear(sys, half, tau, xi, eta, end);
            const FlowState na = solve_coupled(sys, half, tau, xi + h0, eta, end);
            const FlowState nb = solve_coupled(sys, half, tau, xi, eta, end);
            const FlowState lb = solve_linear(sys, half, tau, xi + hb0, eta, end);
            ode_err = 2.0 * std::max({(la.x - lin_a.x).norm() + (na.x - non_a.x).norm(),
                                      (nb.x - non_b.x).norm() + (lb.x - lin_b.x).norm()});
            const long n = std::max(1L, std::lround(horizon / ode.h_ode));
            const double dt = horizon / static_cast<double>(n);
            double il = 0.0, ig = 0.0;
            double ln_prev = log_norm(sys.A(tau)), g_prev = sys.gamma(tau);
            for (long k = 1; k <= n; ++k) {
                const double t = tau + dt * static_cast<double>(k);
                const double ln = log_norm(sys.A(t)), g = sys.gamma(t);
                il += dt * std::max(ln, ln_prev);
                ig += dt * std::max(g, g_prev);
                ln_prev = ln;
                g_prev = g;
            }
            amp_lin = std::exp(il);
            amp_non = std::exp(il + ig);
        }
        // H carries the linear solution onto a nonlinear one.
        const Vec h1 = p.h.eval(end, lin_a.x, lin_a.y, &c);
        cl = cl || c;
        const double dh = (non_a.x - (lin_a.x + h1)).norm();
        // H̄ carries the nonlinear solution onto a linear one.
        const Vec hb1 = p.hbar.eval(end, non_b.x, non_b.y, &c);
        cl = cl || c;
        const double dhb = (lin_b.x - (non_b.x + hb1)).norm();

        const double bud_h = eh * (1.0 + amp_non) + ode_err;
        const double bud_hb = eb * (1.0 + amp_lin) + ode_err;
        if (cl) {
            ++rep.clamped;
            continue;
        }
        rep.max_defect_h = std::max(rep.max_defect_h, dh);
        rep.max_defect_hbar = std::max(rep.max_defect_hbar, dhb);
        rep.max_budget_h = std::max(rep.max_budget_h, bud_h);
        rep.max_budget_hbar = std::max(rep.max_budget_hbar, bud_hb);
        rep.max_ode_error = std::max(rep.max_ode_error, ode_err);
        rep.max_excess = std::max({rep.max_excess, dh - bud_h, dhb - bud_hb});
    }
    return rep;
}

}  // namespace lin

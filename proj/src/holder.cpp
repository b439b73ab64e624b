#include "lin/holder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "lin/error.hpp"
#include "lin/flow.hpp"

namespace lin {

std::string holder_axis_name(HolderAxis a) {
    switch (a) {
    case HolderAxis::x:
        return "x";
    case HolderAxis::y:
        return "y";
    case HolderAxis::joint:
        return "joint";
    }
    return "?";
}

std::string table_kind_name(TableKind k) { return k == TableKind::h ? "h" : "hbar"; }

namespace {

struct PairState {
    Vec x1, y1, x2, y2;
};

double gap(DeltaKind kind, const PairState& p) {
    return kind == DeltaKind::sigma ? (p.y1 - p.y2).norm() : (p.x1 - p.x2).norm();
}

}  // namespace

EnvelopeEmpirical envelope_empirical_check(const Model& m, DeltaKind kind, std::size_t pairs, double horizon,
                                           std::uint64_t seed, double h_ode) {
    const auto& sys = m.sys;
    if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
    if ((kind == DeltaKind::delta3 || kind == DeltaKind::sigma) && sys.dim_y == 0) {
        throw ValidationError("envelope needs a y component");
    }
    EnvelopeEmpirical out;
    out.kind = kind;
    out.pairs = pairs;
    out.horizon = horizon;
    out.envelope = delta_bounds(delta_constants(m), kind, sys.time);
    const bool coupled = kind == DeltaKind::delta2 || kind == DeltaKind::delta3;
    const double t_span = std::min(sys.box.t_half, 10.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto rand_vec = [&](int n, double half) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = half * u(rng);
        return v;
    };
    const bool disc = sys.discrete();
    const int stride = std::max(1, static_cast<int>(std::lround(0.01 / h_ode)));
    const long checkpoints = disc ? std::lround(horizon)
                                  : static_cast<long>(std::floor(horizon / (stride * h_ode) + 1e-9));

    for (std::size_t i = 0; i < pairs; ++i) {
        const double s = disc ? std::round(t_span * u(rng)) : t_span * u(rng);
        PairState st;
        st.x1 = rand_vec(sys.dim_x, sys.box.x_half);
        st.y1 = rand_vec(sys.dim_y, sys.box.y_half);
        st.x2 = kind == DeltaKind::delta3 ? st.x1 : rand_vec(sys.dim_x, sys.box.x_half);
        st.y2 = kind == DeltaKind::delta2 || kind == DeltaKind::delta1 ? st.y1 : rand_vec(sys.dim_y, sys.box.y_half);
        const double g0 = kind == DeltaKind::delta2 || kind == DeltaKind::delta1 ? (st.x1 - st.x2).norm()
                                                                                 : (st.y1 - st.y2).norm();
        if (g0 == 0.0) continue;
        for (int dir = -1; dir <= 1; dir += 2) {
            PairState p = st;
            double t = s;
            for (long c = 1; c <= checkpoints; ++c) {
                if (disc) {
                    const long k = std::lround(t);
                    if (dir > 0) {
                        const auto a = orbit(sys, k, {p.x1, p.y1}, k + 1, coupled);
                        const auto b = orbit(sys, k, {p.x2, p.y2}, k + 1, coupled);
                        p = {a.x, a.y, b.x, b.y};
                    } else {
                        const auto a = orbit(sys, k, {p.x1, p.y1}, k - 1, coupled);
                        const auto b = orbit(sys, k, {p.x2, p.y2}, k - 1, coupled);
                        p = {a.x, a.y, b.x, b.y};
                    }
                    t += dir;
                } else {
                    const double h = dir * h_ode;
                    for (int j = 0; j < stride; ++j, t += h) {
                        rk4_step(sys, t, h, p.x1, p.y1, coupled);
                        rk4_step(sys, t, h, p.x2, p.y2, coupled);
                    }
                    t = s + dir * static_cast<double>(c) * stride * h_ode;
                }
                const double r = gap(kind, p) / (out.envelope(t, s) * g0);
                if (r > out.max_ratio) {
                    out.max_ratio = r;
                    out.worst_s = s;
                    out.worst_t = t;
                }
            }
        }
    }
    return out;
}

void HolderReport::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ValidationError("cannot write " + path);
    std::fprintf(f, "delta_norm,h_gap_norm,ratio,clamped_flag\n");
    for (const auto& p : pairs) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%d\n", p.delta_norm, p.h_gap_norm, p.ratio, p.clamped ? 1 : 0);
    }
    std::fclose(f);
}

HolderReport empirical_holder(const ConjugacyPair& p, HolderAxis axis, TableKind table, double C, double alpha,
                              std::size_t samples, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
    if (!(C > 0.0)) throw ValidationError("C must be positive");
    const FunctionTable& tab = table == TableKind::h ? p.h : p.hbar;
    const double err = table == TableKind::h ? p.h_info.error_budget : p.hbar_info.error_budget;
    const int dx = tab.dim_x(), dy = tab.dim_y();
    if (axis == HolderAxis::y && dy == 0) throw ValidationError("system has no y component");

    // Coordinates that move: x block, y block, or both.
    std::vector<const Axis*> moving;
    for (int i = 0; i < dx; ++i) moving.push_back(axis == HolderAxis::y ? nullptr : &tab.x_axis(i));
    for (int j = 0; j < dy; ++j) moving.push_back(axis == HolderAxis::x ? nullptr : &tab.y_axis(j));
    double width = 0.0, step = 0.0, diam2 = 0.0;
    for (const Axis* a : moving) {
        if (!a) continue;
        width = std::max(width, a->hi - a->lo);
        step = std::max(step, a->step());
        diam2 += (a->hi - a->lo) * (a->hi - a->lo);
    }
    if (width <= 0.0) throw ValidationError("chosen axis is degenerate in the table");
    const double min_sep = std::min(10.0 * step, 0.25 * width);

    HolderReport rep;
    rep.axis = axis;
    rep.table = table;
    rep.C = C;
    rep.alpha = alpha;
    rep.samples = samples;
    rep.c_prime = C + std::pow(std::sqrt(diam2), 1.0 - alpha);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Axis& ta = tab.tau_axis();
    double min_delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            double t = ta.n == 1 ? ta.lo : ta.lo + (ta.node(ta.n - 1) - ta.lo) * u01(rng);
            if (tab.discrete()) t = std::round(t);
            Vec x(dx), y(dy);
            for (int k = 0; k < dx; ++k) {
                const Axis& a = tab.x_axis(k);
                x[k] = a.lo + (a.hi - a.lo) * u01(rng);
            }
            for (int k = 0; k < dy; ++k) {
                const Axis& a = tab.y_axis(k);
                y[k] = a.lo + (a.hi - a.lo) * u01(rng);
            }
            Vec dir(dx + dy);
            for (int k = 0; k < dx + dy; ++k) dir[k] = moving[k] ? gauss(rng) : 0.0;
            const double dn = dir.norm();
            if (dn == 0.0) continue;
            dir /= dn;
            const double delta = min_sep * std::pow(width / min_sep, u01(rng));
            Vec x2 = x + delta * dir.head(dx);
            Vec y2 = y + delta * dir.tail(dy);
            if (!tab.inside(x2, y2)) continue;
            bool c1 = false, c2 = false;
            const Vec a = tab.eval(t, x, y, &c1);
            const Vec b = tab.eval(t, x2, y2, &c2);
            const double g = (a - b).norm();
            rep.pairs.push_back({delta, g, g / std::pow(delta, alpha), c1 || c2});
            if (c1 || c2) {
                ++rep.clamped_excluded;
            } else {
                min_delta = std::min(min_delta, delta);
            }
            break;
        }
    }
    rep.min_separation = std::isfinite(min_delta) ? min_delta : min_sep;
    rep.slack = 2.0 * err / (C * std::pow(rep.min_separation, alpha));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t nfit = 0;
    for (const auto& pr : rep.pairs) {
        if (pr.clamped) continue;
        rep.max_ratio = std::max(rep.max_ratio, pr.ratio);
        if (pr.ratio > C * (1.0 + rep.slack)) ++rep.violations;
        if (pr.h_gap_norm > 0.0) {
            const double lx = std::log(pr.delta_norm), ly = std::log(pr.h_gap_norm);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++nfit;
        }
    }
    const double n = static_cast<double>(nfit);
    const double var = sxx - sx * sx / std::max(n, 1.0);
    if (nfit >= 3 && var > 1e-12 * std::max(1.0, sxx)) {
        rep.fit_exponent = (sxy - sx * sy / n) / var;
        rep.fit_constant = std::exp((sy - rep.fit_exponent * sx) / n);
        rep.fit_degenerate = false;
    }
    return rep;
}

}  // namespace lin

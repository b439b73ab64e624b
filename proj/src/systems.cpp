#include "lin/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lin/error.hpp"

namespace lin {

Mat CoupledSystem::A_inv(double t) const {
    if (linear_inverse) return linear_inverse(t);
    const Mat a = A(t);
    Eigen::FullPivLU<Mat> lu(a);
    if (!lu.isInvertible()) throw InvertibilityError("A_n is singular at n = " + std::to_string(t));
    return lu.inverse();
}

Vec CoupledSystem::f(double t, const Vec& x, const Vec& y) const {
    if (!nonlinearity) return Vec::Zero(dim_x);
    return nonlinearity(t, x, y);
}

Vec CoupledSystem::g(double t, const Vec& y) const {
    if (drift) return drift(t, y);
    return discrete() ? y : Vec(Vec::Zero(dim_y));
}

Vec CoupledSystem::g_inv(double t, const Vec& y) const {
    if (!drift) return y;
    if (!drift_inverse) throw InvertibilityError("system " + name + " declares no inverse drift");
    return drift_inverse(t, y);
}

Projection Projection::identity(int dim) { return {ProjKind::identity, dim, {}}; }

Projection Projection::zero(int dim) { return {ProjKind::zero, dim, {}}; }

Projection Projection::constant(const Mat& p) {
    if (p.isIdentity(0.0)) return identity(static_cast<int>(p.rows()));
    if (p.isZero(0.0)) return zero(static_cast<int>(p.rows()));
    return general(static_cast<int>(p.rows()), [p](double) { return p; });
}

Projection Projection::general(int dim, MatFn family) { return {ProjKind::general, dim, std::move(family)}; }

Mat Projection::operator()(double t) const {
    switch (kind) {
    case ProjKind::identity:
        return Mat::Identity(dim, dim);
    case ProjKind::zero:
        return Mat::Zero(dim, dim);
    case ProjKind::general:
        return family(t);
    }
    return Mat::Zero(dim, dim);
}

const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : catalog()) {
        if (e.name == name) return e;
    }
    throw CatalogError("unknown catalog system '" + name + "'");
}

Params resolve_params(const CatalogEntry& entry, const Params& given) {
    Params out;
    for (const auto& [key, value] : given) {
        bool known = false;
        for (const auto& p : entry.params) known = known || p.name == key;
        if (!known) throw ValidationError(entry.name + ": unknown parameter '" + key + "'");
        (void)value;
    }
    for (const auto& p : entry.params) {
        const auto it = given.find(p.name);
        const double v = it == given.end() ? p.fallback : it->second;
        if (!std::isfinite(v) || v < p.lo || v > p.hi) {
            throw ValidationError(entry.name + ": parameter " + p.name + " = " + std::to_string(v) +
                                  " outside [" + std::to_string(p.lo) + ", " + std::to_string(p.hi) + "]");
        }
        if (p.integer && v != std::floor(v)) {
            throw ValidationError(entry.name + ": parameter " + p.name + " must be an integer");
        }
        out[p.name] = v;
    }
    return out;
}

Model build_model(const std::string& name, const Params& params) {
    const auto& entry = catalog_entry(name);
    const Params resolved = resolve_params(entry, params);
    Model m = entry.builder(resolved);
    m.catalog_name = name;
    m.params = resolved;
    return m;
}

CoupledSystem build_system(const std::string& name, const Params& params) { return build_model(name, params).sys; }

namespace {

constexpr double kEnvelopeSlack = 1e-9;

double ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

}  // namespace

EnvelopeCheckReport envelope_check(const CoupledSystem& sys, std::size_t budget, std::uint64_t seed) {
    if (budget < 1) throw ValidationError("envelope_check needs at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-sys.box.x_half, sys.box.x_half);
    std::uniform_real_distribution<double> uy(-sys.box.y_half, sys.box.y_half);
    std::uniform_real_distribution<double> ut(-sys.box.t_half, sys.box.t_half);
    const auto draw_t = [&] { return sys.discrete() ? std::round(ut(rng)) : ut(rng); };
    const auto draw = [&](int n, auto& dist) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = dist(rng);
        return v;
    };

    EnvelopeCheckReport rep;
    rep.samples = budget;
    const auto note = [&](const char* what, double t, double r, double& slot) {
        slot = std::max(slot, r);
        if (r > 1.0 + kEnvelopeSlack) rep.violations.push_back({what, t, r});
    };
    for (std::size_t i = 0; i < budget; ++i) {
        const double t = draw_t();
        const Vec x = draw(sys.dim_x, ux), z = draw(sys.dim_x, ux);
        const Vec y = draw(sys.dim_y, uy), w = draw(sys.dim_y, uy);
        const Vec fx = sys.f(t, x, y);
        note("mu", t, ratio(norm(fx), sys.mu(t)), rep.max_ratio_mu);
        note("M", t, ratio(norm(fx), sys.M_bound), rep.max_ratio_M);
        note("gamma", t, ratio(norm(fx - sys.f(t, z, y)), sys.gamma(t) * norm(x - z)), rep.max_ratio_gamma);
        note("eps", t, ratio(norm(fx - sys.f(t, z, w)), sys.eps(t) * (norm(x - z) + norm(y - w))),
             rep.max_ratio_eps);
        note("N", t, ratio(sys.eps(t), sys.N_eps_bound), rep.max_ratio_N);
        if (sys.period) {
            const double t2 = t + *sys.period;
            double d = (sys.A(t2) - sys.A(t)).cwiseAbs().maxCoeff();
            d = std::max(d, norm(sys.f(t2, x, y) - fx));
            if (sys.dim_y > 0) d = std::max(d, norm(sys.g(t2, y) - sys.g(t, y)));
            rep.period_defect = std::max(rep.period_defect, d);
        }
    }
    return rep;
}

}  // namespace lin

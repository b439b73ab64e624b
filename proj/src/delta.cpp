#include "lin/delta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lin/error.hpp"

namespace lin {

std::string_view delta_kind_name(DeltaKind k) {
    switch (k) {
    case DeltaKind::delta1:
        return "delta1";
    case DeltaKind::delta2:
        return "delta2";
    case DeltaKind::delta3:
        return "delta3";
    case DeltaKind::sigma:
        return "sigma";
    }
    return "?";
}

DeltaKind parse_delta_kind(std::string_view name) {
    for (auto k : {DeltaKind::delta1, DeltaKind::delta2, DeltaKind::delta3, DeltaKind::sigma}) {
        if (delta_kind_name(k) == name) return k;
    }
    throw ValidationError("unknown envelope kind '" + std::string(name) + "'");
}

double EnvelopeSpec::operator()(double a, double b) const {
    return a >= b ? P_ge * std::exp(R_ge * (a - b)) : P_lt * std::exp(R_lt * (b - a));
}

namespace {

double need(const std::optional<double>& v, const char* name, DeltaKind kind) {
    if (!v) {
        throw ValidationError(std::string(delta_kind_name(kind)) + " envelope needs constant " + name);
    }
    return *v;
}

}  // namespace

EnvelopeSpec delta_bounds(const DeltaConstants& c, DeltaKind kind, TimeKind time) {
    EnvelopeSpec e;
    e.kind = kind;
    e.time = time;
    const bool disc = time == TimeKind::discrete;
    if (kind == DeltaKind::sigma) {
        const double M2 = need(c.M2, "M2", kind);
        e.P_ge = e.P_lt = 1.0;
        e.R_ge = e.R_lt = M2;
        e.constants = {{"M2", M2}};
        return e;
    }
    const double K1 = need(c.K1, "K1", kind), K2 = need(c.K2, "K2", kind);
    const double a1 = need(c.a1, "a1", kind), a2 = need(c.a2, "a2", kind);
    e.constants = {{"K1", K1}, {"K2", K2}, {"a1", a1}, {"a2", a2}};
    if (kind == DeltaKind::delta1) {
        e.P_ge = K1;
        e.R_ge = a1;
        e.P_lt = K2;
        e.R_lt = a2;
        return e;
    }
    const double eps = need(c.eps, "eps", kind);
    e.constants["eps"] = eps;
    if (kind == DeltaKind::delta2) {
        e.P_ge = K1;
        e.P_lt = K2;
        if (!disc) {
            e.R_ge = a1 + K1 * eps;
            e.R_lt = a2 + K2 * eps;
            return e;
        }
        const double back = K2 * eps * std::exp(a2);
        if (back >= 1.0) throw ValidationError("discrete delta2: K2 eps e^{a2} must be below 1");
        e.R_ge = std::log(std::exp(a1) + K1 * eps);
        e.R_lt = a2 - std::log1p(-back);
        return e;
    }
    const double M2 = need(c.M2, "M2", kind);
    e.constants["M2"] = M2;
    if (!disc) {
        const double M3 = std::max({M2, a1, a2});
        e.constants["M3"] = M3;
        e.P_ge = e.P_lt = 2.0;
        e.R_ge = M3 + K1 * eps;
        e.R_lt = M3 + K2 * eps;
        return e;
    }
    const double back = K2 * std::exp(a2) * eps;
    if (back >= 1.0) throw ValidationError("discrete delta3: K2 e^{a2} eps must be below 1");
    e.P_ge = e.P_lt = 1.0;
    e.R_ge = std::log(std::max(K1 * std::exp(a1), std::exp(M2)) + eps);
    e.R_lt = std::log(std::max(K2 * std::exp(a2), std::exp(M2))) - std::log1p(-back);
    return e;
}

DeltaConstants delta_constants(const Model& m) {
    DeltaConstants c;
    if (m.kernel.growth) {
        c.K1 = m.kernel.growth->K1;
        c.K2 = m.kernel.growth->K2;
        c.a1 = m.kernel.growth->a1;
        c.a2 = m.kernel.growth->a2;
    }
    c.eps = m.sys.eps_sup();
    c.M2 = m.sys.M2_bound;
    return c;
}

}  // namespace lin

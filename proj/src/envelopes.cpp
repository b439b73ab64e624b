#include "lin/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lin/error.hpp"

namespace lin {

DecayEnvelope DecayEnvelope::exponential(std::optional<ExpRate> fwd, std::optional<ExpRate> bwd) {
    DecayEnvelope e;
    e.kind = Kind::exponential;
    e.forward = fwd;
    e.backward = bwd;
    return e;
}

DecayEnvelope DecayEnvelope::polynomial() {
    DecayEnvelope e;
    e.kind = Kind::polynomial;
    return e;
}

DecayEnvelope DecayEnvelope::trichotomy(const std::array<ExpRate, 4>& parts) {
    DecayEnvelope e;
    e.kind = Kind::trichotomy;
    e.tri = parts;
    return e;
}

double DecayEnvelope::operator()(double t, double s) const {
    switch (kind) {
    case Kind::none:
        return std::numeric_limits<double>::infinity();
    case Kind::exponential:
        if (s <= t) return forward ? forward->D * std::exp(-forward->lambda * (t - s)) : 0.0;
        return backward ? backward->D * std::exp(-backward->lambda * (s - t)) : 0.0;
    case Kind::polynomial:
        return 1.0 + s * s;
    case Kind::trichotomy: {
        const auto& [p1, p2, p3, p4] = tri;
        if (s >= 0.0) {
            if (t >= s) return p1.D * std::exp(-p1.lambda * (t - s));
            if (t >= 0.0) return p2.D * std::exp(-p2.lambda * (s - t));
            return p2.D * p4.D * std::exp(p4.lambda * t - p2.lambda * s);
        }
        if (t >= 0.0) return p1.D * p3.D * std::exp(-p1.lambda * t + p3.lambda * s);
        if (t >= s) return p3.D * std::exp(-p3.lambda * (t - s));
        return p4.D * std::exp(-p4.lambda * (s - t));
    }
    }
    return 0.0;
}

DecayEnvelope DecayEnvelope::exponential_summary() const {
    if (kind == Kind::exponential) return *this;
    if (kind != Kind::trichotomy) throw ValidationError("envelope has no exponential summary");
    const auto& [p1, p2, p3, p4] = tri;
    ExpRate r;
    r.D = std::max({p1.D, p2.D, p3.D, p4.D, p1.D * p3.D, p2.D * p4.D});
    r.lambda = std::min({p1.lambda, p2.lambda, p3.lambda, p4.lambda});
    return exponential(r, r);
}

WeightProfile WeightProfile::pow(double alpha) const {
    if (kind == Kind::zero) return zero();
    if (kind == Kind::constant) return constant(std::pow(c, alpha));
    // (c/(1+s^2)^2)^alpha decays too slowly to keep the rational form; callers
    // only need the sup for exponential envelopes.
    return constant(std::pow(c, alpha));
}

namespace {

double exp_side(const std::optional<ExpRate>& side, double w, double L, double pref, double rate) {
    if (!side) return 0.0;
    const double kappa = side->lambda - rate;
    if (kappa <= 0.0) throw DivergenceError("tail not integrable: decay rate does not exceed growth rate");
    return side->D * pref * w * std::exp(-kappa * L) / kappa;
}

double exp_side_discrete(const std::optional<ExpRate>& side, double w, long L, double pref, double rate) {
    if (!side) return 0.0;
    const double kappa = side->lambda - rate;
    if (kappa <= 0.0) throw DivergenceError("tail not summable: decay rate does not exceed growth rate");
    return side->D * pref * w * std::exp(-kappa * static_cast<double>(L)) / (-std::expm1(-kappa));
}

// sum_{k >= a} 1/(1+k^2)
double rational_tail_sum(long a) {
    double s = 0.0;
    while (a < 1) {
        s += 1.0 / (1.0 + static_cast<double>(a) * static_cast<double>(a));
        ++a;
    }
    return s + std::numbers::pi / 2.0 - std::atan(static_cast<double>(a - 1));
}

void require_polynomial_pair(const WeightProfile& w, const TailGrowth& g) {
    if (w.kind != WeightProfile::Kind::rational_decay) {
        throw DivergenceError("polynomial kernel envelope needs a rational-decay weight");
    }
    if (g.rate_forward > 0.0 || g.rate_backward > 0.0) {
        throw DivergenceError("polynomial kernel envelope cannot absorb exponential growth");
    }
}

}  // namespace

double tail_bound(const DecayEnvelope& env, const WeightProfile& w, double L, double t, const TailGrowth& g) {
    if (L < 0.0) throw ValidationError("truncation radius must be non-negative");
    if (w.kind == WeightProfile::Kind::zero) return 0.0;
    switch (env.kind) {
    case DecayEnvelope::Kind::none:
        throw ValidationError("kernel has no certified decay envelope");
    case DecayEnvelope::Kind::exponential:
    case DecayEnvelope::Kind::trichotomy: {
        const DecayEnvelope e = env.exponential_summary();
        return exp_side(e.forward, w.sup(), L, g.pref_forward, g.rate_forward) +
               exp_side(e.backward, w.sup(), L, g.pref_backward, g.rate_backward);
    }
    case DecayEnvelope::Kind::polynomial: {
        require_polynomial_pair(w, g);
        const double right = std::numbers::pi / 2.0 - std::atan(t + L);
        const double left = std::atan(t - L) + std::numbers::pi / 2.0;
        return w.c * (g.pref_backward * right + g.pref_forward * left);
    }
    }
    return 0.0;
}

double tail_bound_discrete(const DecayEnvelope& env, const WeightProfile& w, long L, long m, const TailGrowth& g) {
    if (L < 1) throw ValidationError("discrete truncation radius must be at least 1");
    if (w.kind == WeightProfile::Kind::zero) return 0.0;
    switch (env.kind) {
    case DecayEnvelope::Kind::none:
        throw ValidationError("kernel has no certified decay envelope");
    case DecayEnvelope::Kind::exponential:
    case DecayEnvelope::Kind::trichotomy: {
        const DecayEnvelope e = env.exponential_summary();
        return exp_side_discrete(e.forward, w.sup(), L, g.pref_forward, g.rate_forward) +
               exp_side_discrete(e.backward, w.sup(), L, g.pref_backward, g.rate_backward);
    }
    case DecayEnvelope::Kind::polynomial: {
        require_polynomial_pair(w, g);
        return w.c * (g.pref_backward * rational_tail_sum(m + L) + g.pref_forward * rational_tail_sum(L - m));
    }
    }
    return 0.0;
}

double auto_truncation(const DecayEnvelope& env, const WeightProfile& w, double target, double t, double l_max,
                       const TailGrowth& g) {
    if (tail_bound(env, w, l_max, t, g) > target) return l_max;
    if (tail_bound(env, w, 0.0, t, g) <= target) return 0.0;
    double lo = 0.0, hi = l_max;
    for (int i = 0; i < 200 && hi - lo > 1e-9 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail_bound(env, w, mid, t, g) <= target ? hi : lo) = mid;
    }
    return hi;
}

long auto_truncation_discrete(const DecayEnvelope& env, const WeightProfile& w, double target, long m, long l_max,
                              const TailGrowth& g) {
    if (tail_bound_discrete(env, w, l_max, m, g) > target) return l_max;
    long lo = 1, hi = l_max;
    if (tail_bound_discrete(env, w, lo, m, g) <= target) return lo;
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        (tail_bound_discrete(env, w, mid, m, g) <= target ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace lin

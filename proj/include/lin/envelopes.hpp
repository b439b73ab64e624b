#pragma once

// Certified upper bounds on the Green kernel norm and on the scalar weights
// (mu, gamma, eps) that multiply it, plus closed-form bounds for the parts of
// the improper integrals/sums cut off by a finite truncation radius.

#include <array>
#include <optional>

namespace lin {

/// D * exp(-lambda * distance).
struct ExpRate {
    double D = 1.0;
    double lambda = 1.0;
};

/// Upper bound on |G(t,s)| as a function of (t,s).
///
/// exponential: forward branch (s <= t) and backward branch (s > t), each
///   optional; a missing branch means the kernel vanishes there.
/// polynomial:  1 + s^2 for both branches.
/// trichotomy:  four half-line estimates spliced at t = 0.
struct DecayEnvelope {
    enum class Kind { none, exponential, polynomial, trichotomy };

    Kind kind = Kind::none;
    std::optional<ExpRate> forward;
    std::optional<ExpRate> backward;
    std::array<ExpRate, 4> tri{};

    static DecayEnvelope exponential(std::optional<ExpRate> fwd, std::optional<ExpRate> bwd);
    static DecayEnvelope polynomial();
    static DecayEnvelope trichotomy(const std::array<ExpRate, 4>& parts);

    bool certified() const { return kind != Kind::none; }

    /// Pointwise bound at (t, s).
    double operator()(double t, double s) const;

    /// A pure exponential envelope dominating this one (for trichotomy:
    /// D = max of the D_i and the cross products, lambda = min lambda_i).
    /// Not available for polynomial envelopes.
    DecayEnvelope exponential_summary() const;
};

/// Shape of a scalar weight w(s) entering the kernel integrand, as far as the
/// tail bound needs to know it.
///
/// constant:       w(s) <= c everywhere (c is a sup bound, not necessarily exact)
/// rational_decay: w(s) <= c / (1 + s^2)^2 (continuous) or, for sums, the
///                 index-shifted weight w_{k-1} <= c / (1 + k^2)^2
struct WeightProfile {
    enum class Kind { zero, constant, rational_decay };

    Kind kind = Kind::zero;
    double c = 0.0;

    static WeightProfile zero() { return {Kind::zero, 0.0}; }
    static WeightProfile constant(double sup) { return {sup == 0.0 ? Kind::zero : Kind::constant, sup}; }
    static WeightProfile rational_decay(double c) { return {c == 0.0 ? Kind::zero : Kind::rational_decay, c}; }

    /// Global sup of the weight.
    double sup() const { return kind == Kind::zero ? 0.0 : c; }

    /// Weight raised to the power alpha (sup bound stays a sup bound).
    WeightProfile pow(double alpha) const;
};

/// Extra growth multiplying the integrand on each side of s = t, as produced
/// by a Hoelder envelope raised to alpha: pref * exp(rate * |t - s|).
/// `forward` is the side s <= t, `backward` the side s > t.
struct TailGrowth {
    double pref_forward = 1.0;
    double rate_forward = 0.0;
    double pref_backward = 1.0;
    double rate_backward = 0.0;
};

/// Bound on the integral of envelope * weight * growth over |s - t| > L.
/// Throws DivergenceError when the combination is not integrable.
double tail_bound(const DecayEnvelope& env, const WeightProfile& w, double L, double t = 0.0,
                  const TailGrowth& growth = {});

/// Bound on the sum over k with |m - k| >= L of envelope(m,k) * w_{k-1} * growth.
/// Exponential envelopes are read as D * exp(-lambda |m-k|).
double tail_bound_discrete(const DecayEnvelope& env, const WeightProfile& w, long L, long m = 0,
                           const TailGrowth& growth = {});

/// Smallest L (continuous) with tail_bound <= target, searched up to l_max.
/// Returns l_max when the target is not reachable inside it.
double auto_truncation(const DecayEnvelope& env, const WeightProfile& w, double target, double t,
                       double l_max, const TailGrowth& growth = {});

/// Discrete counterpart of auto_truncation.
long auto_truncation_discrete(const DecayEnvelope& env, const WeightProfile& w, double target, long m,
                              long l_max, const TailGrowth& growth = {});

}  // namespace lin

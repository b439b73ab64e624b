#pragma once

// Separation envelopes Delta_1, Delta_2, Delta_3 and sigma used by the
// Hoelder conditions. Every envelope is two-sided exponential:
//
//   Delta(a, b) = P_ge * exp(R_ge * (a - b))   for a >= b
//               = P_lt * exp(R_lt * (b - a))   for a <  b
//
// Inside the Hoelder integrals the envelope is evaluated as Delta(s, t) with s
// the integration variable, so the side s < t of the kernel meets the
// (P_lt, R_lt) branch.

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "lin/systems.hpp"

namespace lin {

enum class DeltaKind { delta1, delta2, delta3, sigma };

std::string_view delta_kind_name(DeltaKind k);
DeltaKind parse_delta_kind(std::string_view name);

struct DeltaConstants {
    std::optional<double> K1, K2, a1, a2, eps, M2;
};

struct EnvelopeSpec {
    DeltaKind kind = DeltaKind::delta1;
    TimeKind time = TimeKind::continuous;
    double P_ge = 1.0;
    double R_ge = 0.0;
    double P_lt = 1.0;
    double R_lt = 0.0;
    std::map<std::string, double> constants;

    double operator()(double a, double b) const;
};

/// Envelope of the given kind from the constants. Continuous forms:
///   Delta_1: (K1, a1 | K2, a2)
///   Delta_2: (K1, a1 + K1 eps | K2, a2 + K2 eps)
///   Delta_3: (2, M3 + K1 eps | 2, M3 + K2 eps),  M3 = max{M2, a1, a2}
///   sigma:   (1, M2 | 1, M2)
/// Discrete forms follow from the discrete Gronwall argument:
///   Delta_2: (K1, ln(e^{a1} + K1 eps) | K2, a2 - ln(1 - K2 eps e^{a2}))
///   Delta_3: (1, ln(max{K1 e^{a1}, e^{M2}} + eps) | 1, ln max{K2 e^{a2}, e^{M2}} - ln(1 - K2 e^{a2} eps))
/// where M2 is the log-Lipschitz constant of g_n and g_n^{-1}.
/// Throws ValidationError when a required constant is missing or the
/// backward discrete recursion does not contract.
EnvelopeSpec delta_bounds(const DeltaConstants& c, DeltaKind kind, TimeKind time = TimeKind::continuous);

/// Constants of a model (growth data, eps = sup eps(t), M2).
DeltaConstants delta_constants(const Model& m);

}  // namespace lin

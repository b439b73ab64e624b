#pragma once

// Empirical side of the Hoelder theory: trajectory-pair checks of the
// separation envelopes and sampled Hoelder quotients of solved tables.

#include <cstdint>
#include <string>
#include <vector>

#include "lin/conjugacy.hpp"
#include "lin/delta.hpp"

namespace lin {

struct EnvelopeEmpirical {
    DeltaKind kind = DeltaKind::delta2;
    std::size_t pairs = 0;
    double horizon = 0.0;
    double max_ratio = 0.0;  // observed gap / envelope prediction
    double worst_s = 0.0;
    double worst_t = 0.0;
    EnvelopeSpec envelope;
};

/// Integrates trajectory pairs in the scenario defining the envelope and
/// compares gaps with its prediction at every recorded time within
/// +-horizon of the start:
///   delta2: coupled solutions sharing y, |x(t) - z(t)| vs Delta2(t,s)|x(s) - z(s)|
///   delta3: coupled solutions with equal x at s, |x(t) - z(t)| vs Delta3(t,s)|y(s) - w(s)|
///   sigma:  drift solutions, |y(t) - w(t)| vs sigma(t,s)|y(s) - w(s)|
///   delta1: linear solutions, |x(t) - z(t)| vs Delta1(t,s)|x(s) - z(s)|
EnvelopeEmpirical envelope_empirical_check(const Model& m, DeltaKind kind, std::size_t pairs, double horizon,
                                           std::uint64_t seed, double h_ode = 1e-3);

enum class HolderAxis { x, y, joint };
enum class TableKind { h, hbar };

struct HolderPair {
    double delta_norm;
    double h_gap_norm;
    double ratio;
    bool clamped;
};

struct HolderReport {
    HolderAxis axis = HolderAxis::x;
    TableKind table = TableKind::h;
    double C = 1.0;
    double alpha = 0.5;
    std::size_t samples = 0;
    std::size_t violations = 0;
    std::size_t clamped_excluded = 0;
    double max_ratio = 0.0;
    double slack = 0.0;          // relative: violation when ratio > C (1 + slack)
    double min_separation = 0.0;
    double fit_exponent = 0.0;
    double fit_constant = 0.0;
    bool fit_degenerate = true;
    double c_prime = 0.0;        // C + diam^(1 - alpha): constant for H itself on the box
    std::vector<HolderPair> pairs;

    void write_csv(const std::string& path) const;
};

/// Samples point pairs differing along `axis`, at least 10 grid cells apart
/// and inside the box, and counts quotients |dh| / |darg|^alpha above
/// C (1 + slack) with slack = 2 * table error budget / (C * min |darg|^alpha).
HolderReport empirical_holder(const ConjugacyPair& p, HolderAxis axis, TableKind table, double C, double alpha,
                              std::size_t samples, std::uint64_t seed);

std::string holder_axis_name(HolderAxis a);
std::string table_kind_name(TableKind k);

}  // namespace lin

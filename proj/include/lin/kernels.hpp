#pragma once

// Data-parallel inner loops used by quadrature and Picard sweeps.
//
// Each kernel has a portable scalar reference implementation and an AVX2/FMA
// variant. The variant is picked once at runtime from CPUID; setting the
// environment variable LIN_SIMD=scalar forces the reference path.

#include <span>
#include <string_view>

namespace lin::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when the running CPU supports AVX2 and FMA.
bool avx2_supported();

/// ISA used by the dispatched entry points below.
Isa active_isa();

/// Override dispatch (tests, benchmarks). Requesting avx2 on a CPU without
/// it falls back to scalar.
void force_isa(Isa isa);

/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

/// y[i] += alpha * x[i]
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// max_i |a[i] - b[i]|; 0 for empty input.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// max_i |a[i]|; 0 for empty input.
double max_abs(std::span<const double> a);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
}  // namespace scalar

namespace avx2 {
// Callers must check avx2_supported() first.
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
}  // namespace avx2

}  // namespace lin::kernels

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "lin/kernels.hpp"

namespace lin::kernels {

namespace {

Isa detect() {
    if (const char* env = std::getenv("LIN_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0) {
        return Isa::scalar;
    }
    return avx2_supported() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (isa == Isa::avx2 && !avx2_supported()) isa = Isa::scalar;
    current().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
    return active_isa() == Isa::avx2 ? avx2::dot(a, b) : scalar::dot(a, b);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (active_isa() == Isa::avx2) {
        avx2::axpy(alpha, x, y);
    } else {
        scalar::axpy(alpha, x, y);
    }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    return active_isa() == Isa::avx2 ? avx2::max_abs_diff(a, b) : scalar::max_abs_diff(a, b);
}

double max_abs(std::span<const double> a) {
    return active_isa() == Isa::avx2 ? avx2::max_abs(a) : scalar::max_abs(a);
}

}  // namespace lin::kernels

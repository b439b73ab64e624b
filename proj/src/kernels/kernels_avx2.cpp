#include <algorithm>
#include <cmath>

#include "lin/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define LIN_HAVE_X86 1
#endif

namespace lin::kernels::avx2 {

#if LIN_HAVE_X86

namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

__attribute__((target("avx2,fma"))) inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

__attribute__((target("avx2,fma"))) inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

}  // namespace

__attribute__((target("avx2,fma"))) double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const double* pa = a.data();
    const double* pb = b.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += pa[i] * pb[i];
    return s;
}

__attribute__((target("avx2,fma"))) void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    const double* px = x.data();
    double* py = y.data();
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(py + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i)));
    }
    for (; i < n; ++i) py[i] += alpha * px[i];
}

__attribute__((target("avx2,fma"))) double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        m = _mm256_max_pd(m, abs_pd(d));
    }
    double r = hmax(m);
    for (; i < n; ++i) r = std::max(r, std::abs(a[i] - b[i]));
    return r;
}

__attribute__((target("avx2,fma"))) double max_abs(std::span<const double> a) {
    const std::size_t n = a.size();
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, abs_pd(_mm256_loadu_pd(a.data() + i)));
    double r = hmax(m);
    for (; i < n; ++i) r = std::max(r, std::abs(a[i]));
    return r;
}

#else

double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
void axpy(double alpha, std::span<const double> x, std::span<double> y) { scalar::axpy(alpha, x, y); }
double max_abs_diff(std::span<const double> a, std::span<const double> b) { return scalar::max_abs_diff(a, b); }
double max_abs(std::span<const double> a) { return scalar::max_abs(a); }

#endif

}  // namespace lin::kernels::avx2

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lin/kernels.hpp"

using namespace lin::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_SUITE("kernels") {
    TEST_CASE("scalar reference kernels on hand values") {
        const std::vector<double> a{1, 2, 3}, b{4, -5, 6};
        CHECK(scalar::dot(a, b) == 12.0);
        CHECK(scalar::max_abs_diff(a, b) == 7.0);
        CHECK(scalar::max_abs(b) == 6.0);
        CHECK(scalar::max_abs({}) == 0.0);
        std::vector<double> y{1, 1, 1};
        scalar::axpy(2.0, a, y);
        CHECK(y == std::vector<double>{3, 5, 7});
    }

    TEST_CASE("avx2 variants match the scalar reference") {
        if (!avx2_supported()) return;
        std::mt19937_64 rng(7);
        for (std::size_t n = 0; n < 67; ++n) {
            const auto a = random_vec(n, rng), b = random_vec(n, rng);
            const double ref = scalar::dot(a, b);
            CHECK(avx2::dot(a, b) == doctest::Approx(ref).epsilon(1e-13).scale(1.0));
            CHECK(avx2::max_abs_diff(a, b) == scalar::max_abs_diff(a, b));
            CHECK(avx2::max_abs(a) == scalar::max_abs(a));
            auto y1 = b, y2 = b;
            scalar::axpy(0.37, a, y1);
            avx2::axpy(0.37, a, y2);
            for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-15));
        }
    }

    TEST_CASE("max reductions see NaN-free extremes at every lane") {
        if (!avx2_supported()) return;
        for (std::size_t n = 1; n < 20; ++n) {
            for (std::size_t k = 0; k < n; ++k) {
                std::vector<double> a(n, 0.5);
                a[k] = -3.0;
                CHECK(avx2::max_abs(a) == 3.0);
            }
        }
    }

    TEST_CASE("dispatch can be forced to the reference path") {
        const Isa before = active_isa();
        force_isa(Isa::scalar);
        CHECK(active_isa() == Isa::scalar);
        const std::vector<double> a{1.5, -2.0};
        CHECK(dot(a, a) == 6.25);
        force_isa(Isa::avx2);
        CHECK(active_isa() == (avx2_supported() ? Isa::avx2 : Isa::scalar));
        force_isa(before);
        CHECK(isa_name(Isa::scalar) == "scalar");
    }
}

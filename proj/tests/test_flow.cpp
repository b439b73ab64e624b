#include <doctest.h>

#include <cmath>
#include <random>

#include "lin/error.hpp"
#include "lin/flow.hpp"

using namespace lin;

TEST_SUITE("flow") {
    TEST_CASE("scalar evolution family matches the exponential") {
        const auto sys = build_system("scalar_tanh");
        EvolutionFamily ef(sys.linear_part, 1, 1e-3, 10.0);
        CHECK(ef(1.0, 0.0)(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
        CHECK(ef(-2.0, 3.0)(0, 0) == doctest::Approx(std::exp(5.0)).epsilon(1e-11));
        CHECK(ef(0.3337, 0.3337)(0, 0) == 1.0);
        CHECK_THROWS_AS(ef(11.0, 0.0), DomainError);
    }

    TEST_CASE("cocycle law on random triples") {
        const auto sys = build_system("periodic_tanh");
        EvolutionFamily ef(sys.linear_part, 1, 1e-3, 10.0);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-9.0, 9.0);
        for (int i = 0; i < 50; ++i) {
            const double t = u(rng), r = u(rng), s = u(rng);
            const double lhs = (ef(t, r) * ef(r, s))(0, 0), rhs = ef(t, s)(0, 0);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }

    TEST_CASE("RK4 error drops by about 16 when the step halves") {
        const auto sys = build_system("scalar_tanh");
        const double e1 = std::abs(EvolutionFamily(sys.linear_part, 1, 0.1, 2.0)(1.0, 0.0)(0, 0) - std::exp(-1.0));
        const double e2 = std::abs(EvolutionFamily(sys.linear_part, 1, 0.05, 2.0)(1.0, 0.0)(0, 0) - std::exp(-1.0));
        CHECK(e1 / e2 >= 8.0);
        CHECK(e1 / e2 <= 20.0);
    }

    TEST_CASE("coupled flow reduces to the linear one when eps is zero") {
        const auto sys = build_system("scalar_tanh", {{"eps", 0.0}});
        Vec xi(1), eta(1);
        xi << 1.3;
        eta << 0.2;
        const auto s = solve_coupled(sys, {}, 0.0, xi, eta, 1.5);
        CHECK(s.x[0] == doctest::Approx(1.3 * std::exp(-1.5)).epsilon(1e-11));
        CHECK(s.y[0] == 0.2);
    }

    TEST_CASE("coupled flow is reversible") {
        const auto sys = build_system("saddle_tanh", {{"eps", 0.2}, {"kappa", 0.5}, {"beta", 0.5}});
        Vec xi(2), eta(1);
        xi << 0.4, -0.3;
        eta << 0.8;
        const auto fwd = solve_coupled(sys, {}, 0.0, xi, eta, 1.0);
        const auto back = solve_coupled(sys, {}, 1.0, fwd.x, fwd.y, 0.0);
        CHECK((back.x - xi).norm() <= 1e-10);
        CHECK((back.y - eta).norm() <= 1e-10);
    }

    TEST_CASE("discrete cocycle products and inverses") {
        const auto sys = build_system("d_scalar_tanh");
        Cocycle c(sys, 20);
        CHECK(c(5, 2)(0, 0) == doctest::Approx(0.125));
        CHECK(c(2, 5)(0, 0) == doctest::Approx(8.0));
        CHECK(c(3, 3)(0, 0) == 1.0);
        CHECK_THROWS_AS(c(25, 0), DomainError);
    }

    TEST_CASE("discrete orbits run forward and back") {
        const auto sys = build_system("d_saddle_tanh", {{"eps", 0.1}, {"kappa", 0.5}});
        FlowState s0{Vec(2), Vec(1)};
        s0.x << 0.3, -0.6;
        s0.y << 0.5;
        const auto s5 = orbit(sys, 0, s0, 5, true);
        const auto back = orbit(sys, 5, s5, 0, true);
        CHECK((back.x - s0.x).norm() <= 1e-10);
        CHECK((back.y - s0.y).norm() <= 1e-12);
    }
}

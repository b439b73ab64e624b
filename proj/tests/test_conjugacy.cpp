#include <doctest.h>

#include <cmath>
#include <random>

#include "lin/conjugacy.hpp"
#include "lin/error.hpp"
#include "lin/kernels.hpp"

using namespace lin;

namespace {

SolveConfig small_solve(double tol = 1e-6) {
    SolveConfig c;
    c.quad.tol = tol;
    c.residual_samples = 2000;
    return c;
}

}  // namespace

TEST_SUITE("conjugacy") {
    TEST_CASE("zero nonlinearity gives identically zero conjugacies") {
        const Model m = build_model("zero_f", {{"dim", 2}});
        const auto p = solve_pair(m, box_grid(m, 9, 1), small_solve());
        CHECK(p.h.sup_norm() == 0.0);
        CHECK(p.hbar.sup_norm() == 0.0);
        CHECK(p.h_info.error_budget <= 1e-12);
        const Model d = build_model("d_zero_f");
        const auto pd = solve_pair(d, box_grid(d, 9, 1), small_solve());
        CHECK(pd.h.sup_norm() == 0.0);
        CHECK(pd.hbar.sup_norm() == 0.0);
    }

    TEST_CASE("Picard sweeps contract at rate q") {
        const Model m = build_model("scalar_tanh", {{"eps", 0.1}});
        SolveInfo info;
        const auto h = solve_h(m, box_grid(m, 41, 2), small_solve(1e-5), &info);
        REQUIRE(info.deltas.size() >= 2);
        for (std::size_t k = 1; k < info.deltas.size(); ++k) {
            CHECK(info.deltas[k] / info.deltas[k - 1] <= info.q_value + 0.05);
        }
        const int bound = static_cast<int>(std::ceil(std::log(1e-5 * (1 - info.q_value) / info.N_value) /
                                                     std::log(info.q_value))) + 3;
        CHECK(info.sweeps <= bound);
        CHECK(h.sup_norm() <= info.N_value + 1e-5);
    }

    TEST_CASE("h is odd for an odd nonlinearity") {
        const Model m = build_model("scalar_tanh", {{"eps", 0.2}});
        const auto p = solve_pair(m, box_grid(m, 41, 2), small_solve());
        Vec x(1), mx(1), y(1);
        y << 0.0;
        for (double v : {0.3, 1.1, 2.7, 4.4}) {
            x << v;
            mx << -v;
            CHECK(p.h.eval(0.0, x, y)[0] == doctest::Approx(-p.h.eval(0.0, mx, y)[0]).epsilon(1e-12));
            CHECK(p.hbar.eval(0.0, x, y)[0] == doctest::Approx(-p.hbar.eval(0.0, mx, y)[0]).epsilon(1e-12));
            CHECK(p.h.eval(0.0, x, y)[0] > 0.0);
            CHECK(p.hbar.eval(0.0, x, y)[0] < 0.0);
        }
    }

    TEST_CASE("failing hypothesis and exhausted sweeps") {
        const Model bad = build_model("scalar_tanh", {{"eps", 1.2}});
        CHECK_THROWS_AS(solve_h(bad, box_grid(bad, 5, 2), small_solve()), HypothesisError);
        const Model m = build_model("scalar_tanh");
        auto cfg = small_solve();
        cfg.max_sweeps = 2;
        try {
            solve_h(m, box_grid(m, 11, 2), cfg);
            FAIL("expected ConvergenceError");
        } catch (const ConvergenceError& e) {
            CHECK(e.history().size() == 2);
        }
        CHECK_THROWS_AS(solve_h_discrete(m, box_grid(m, 5, 2), small_solve()), ValidationError);
    }

    TEST_CASE("continuous inverse and mapping identities within budget") {
        const Model m = build_model("scalar_tanh");
        const auto p = solve_pair(m, box_grid(m, 161, 2), small_solve());
        const auto inv = verify_inverse(p, 200, 3);
        CHECK(inv.pass());
        CHECK(inv.max_defect > 0.0);
        const auto map = verify_mapping(p, 100, 2.0, 4);
        CHECK(map.pass());
        CHECK(map.max_ode_error > 0.0);
        CHECK(map.max_ode_error < 1e-10);
    }

    TEST_CASE("discrete inverse and mapping identities within budget") {
        const Model m = build_model("d_saddle_tanh", {{"eps", 0.05}, {"kappa", 0.5}});
        const auto p = solve_pair(m, box_grid(m, 21, 5), small_solve());
        const auto inv = verify_inverse(p, 200, 3);
        CHECK(inv.pass());
        const auto map = verify_mapping(p, 100, 2.0, 4);
        CHECK(map.pass());
        CHECK(map.max_ode_error == 0.0);
    }

    TEST_CASE("grid solver agrees with the pointwise oracle") {
        const Model m = build_model("d_scalar_tanh");
        SolveInfo info;
        const GridSpec g = box_grid(m, 801, 2);
        const auto h = solve_h_discrete(m, g, small_solve(), &info);
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(-4.5, 4.5);
        for (int i = 0; i < 10; ++i) {
            Vec xi(1), eta(1);
            xi << u(rng);
            eta << u(rng);
            const auto o = brute_force_h_discrete(m, 0, xi, eta, 20, static_cast<long>(info.L), info.q_value,
                                                  info.N_value);
            CHECK(o.radius < 1e-6);
            CHECK((h.eval(0.0, xi, eta) - o.value).norm() <= o.radius + info.error_budget);
        }
    }

    TEST_CASE("oracle iterates converge geometrically") {
        const Model m = build_model("d_scalar_tanh", {{"eps", 0.2}});
        Vec xi(1), eta(1);
        xi << 0.7;
        eta << 0.0;
        const auto o3 = brute_force_h_discrete(m, 0, xi, eta, 3, 12, 0.4, 0.4);
        const auto o12 = brute_force_h_discrete(m, 0, xi, eta, 12, 12, 0.4, 0.4);
        CHECK((o3.value - o12.value).norm() <= o3.radius + o12.radius);
        CHECK(o12.radius < o3.radius);
    }

    TEST_CASE("periodicity defect of synthetic tables") {
        FunctionTable tab(Axis{0.0, 4.0, 81}, {Axis{-1.0, 1.0, 3}}, {}, 1);
        for (std::size_t i = 0; i < tab.node_count(); ++i) {
            double t;
            Vec x, y;
            tab.node(i, t, x, y);
            tab.set_value(i, Vec::Constant(1, std::sin(M_PI * t) * x[0]));
        }
        CHECK(periodicity_defect(tab, 2.0, 0.0) <= 1e-12);
        CHECK(periodicity_defect(tab, 1.0, 0.0) == doctest::Approx(2.0).epsilon(1e-3));
        CHECK_THROWS_AS(periodicity_defect(tab, 5.0, 0.0), ValidationError);
        FunctionTable flat(Axis{}, {Axis{-1.0, 1.0, 3}}, {}, 1);
        CHECK(periodicity_defect(flat, 1.0, 0.0) == 0.0);
    }

    TEST_CASE("non-autonomous solve carries tau dependence") {
        const Model m = build_model("periodic_tanh", {{"eps", 0.1}});
        auto cfg = small_solve();
        cfg.quad.h_ode = 0.01;
        cfg.quad.stride = 2;
        const auto g = box_grid(m, 21, 1, Axis{0.0, 2.0 * M_PI, 17});
        SolveInfo info;
        const auto h = solve_h(m, g, cfg, &info);
        CHECK(h.tau_axis().n == 17);
        CHECK(h.sup_norm() <= info.N_value + cfg.quad.tol);
        Vec x(1), y(m.sys.dim_y);
        x << 1.0;
        y.setZero();
        CHECK(std::abs(h.eval(0.0, x, y)[0] - h.eval(M_PI, x, y)[0]) > 1e-4);
    }

    TEST_CASE("solver output does not depend on the dispatched ISA") {
        const Model m = build_model("saddle_tanh", {{"eps", 0.1}, {"kappa", 0.5}});
        const auto g = box_grid(m, 9, 5);
        const auto before = kernels::active_isa();
        kernels::force_isa(kernels::Isa::scalar);
        const auto ref = solve_h(m, g, small_solve());
        kernels::force_isa(kernels::Isa::avx2);
        const auto vec = solve_h(m, g, small_solve());
        kernels::force_isa(before);
        REQUIRE(ref.data().size() == vec.data().size());
        for (std::size_t i = 0; i < ref.data().size(); ++i) {
            CHECK(std::abs(ref.data()[i] - vec.data()[i]) <= 1e-13);
        }
    }
}

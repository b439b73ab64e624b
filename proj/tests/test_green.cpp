#include <doctest.h>

#include <cmath>
#include <limits>

#include "lin/error.hpp"
#include "lin/green.hpp"

using namespace lin;

namespace {

QuadConfig fine() {
    QuadConfig q;
    q.stride = 1;
    q.window = 80.0;
    q.L = 64.0;
    return q;
}

}  // namespace

TEST_SUITE("green") {
    TEST_CASE("saddle kernel values") {
        const Model m = build_model("saddle_tanh");
        const auto b = make_kernel(m, QuadConfig{});
        const Mat fwd = green_eval(*b.gk, 2.0, 0.0), bwd = green_eval(*b.gk, 0.0, 2.0);
        CHECK(fwd(0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
        CHECK(std::abs(fwd(1, 1)) <= 1e-15);
        CHECK(std::abs(bwd(0, 0)) <= 1e-15);
        CHECK(bwd(1, 1) == doctest::Approx(-std::exp(-2.0)).epsilon(1e-10));
    }

    TEST_CASE("discrete kernel values") {
        const Model m = build_model("d_saddle_tanh");
        const auto b = make_kernel(m, QuadConfig{});
        CHECK(green_eval(*b.gkd, 3, 0)(0, 0) == doctest::Approx(0.125));
        CHECK(green_eval(*b.gkd, 0, 3)(1, 1) == doctest::Approx(-0.125));
        CHECK(green_eval(*b.gkd, 0, 3)(0, 0) == 0.0);
    }

    TEST_CASE("scalar constant coefficients: N = q = eps") {
        const Model m = build_model("scalar_tanh", {{"eps", 0.1}});
        const auto h = hypothesis_N_q(m, QuadConfig{});
        CHECK(std::abs(h.N_value - 0.1) <= 1e-6);
        CHECK(std::abs(h.q_value - 0.1) <= 1e-6);
        CHECK(std::abs(h.G_integral - 1.0) <= 1e-5);
        CHECK(h.tail_N <= 1e-6 / 3.0);
        CHECK(h.find("bound")->pass);
        CHECK(h.find("bound")->margin == doctest::Approx(0.9).epsilon(1e-5));
        CHECK(h.find("r")->pass);
    }

    TEST_CASE("saddle: both branches contribute") {
        const Model m = build_model("saddle_tanh", {{"eps", 0.1}});
        const auto h = hypothesis_N_q(m, QuadConfig{});
        CHECK(h.N_value == doctest::Approx(2.0 * 0.1 * std::sqrt(2.0)).epsilon(1e-5));
        CHECK(h.q_value == doctest::Approx(0.2).epsilon(1e-5));
    }

    TEST_CASE("discrete geometric sums") {
        const Model m = build_model("d_scalar_tanh", {{"eps", 0.1}, {"a", 0.5}});
        const auto h = hypothesis_N_q(m, QuadConfig{});
        CHECK(h.discrete);
        CHECK(std::abs(h.N_value - 0.2) <= 1e-6);
        CHECK(h.find("boundd")->pass);
        CHECK(h.find("rd") != nullptr);
    }

    TEST_CASE("failing contraction is reported, not thrown") {
        const Model m = build_model("scalar_tanh", {{"eps", 1.5}});
        const auto h = hypothesis_N_q(m, QuadConfig{});
        CHECK_FALSE(h.find("bound")->pass);
        CHECK(h.find("bound")->margin < 0.0);
    }

    TEST_CASE("exponential tail bound closed form") {
        const auto env = DecayEnvelope::exponential(ExpRate{2.0, 0.5}, std::nullopt);
        const double t = tail_bound(env, WeightProfile::constant(0.3), 4.0);
        CHECK(t == doctest::Approx(2.0 * 0.3 * std::exp(-2.0) / 0.5).epsilon(1e-12));
        CHECK(auto_truncation(env, WeightProfile::constant(0.3), 1e-6, 0.0, 100.0) <= 100.0);
        const auto both = DecayEnvelope::exponential(ExpRate{1.0, 1.0}, ExpRate{1.0, 1.0});
        CHECK(tail_bound(both, WeightProfile::constant(1.0), 2.0) == doctest::Approx(2.0 * std::exp(-2.0)));
    }

    TEST_CASE("growing Hoelder factor beyond the decay rate diverges") {
        const auto env = DecayEnvelope::exponential(ExpRate{1.0, 1.0}, std::nullopt);
        TailGrowth g;
        g.rate_forward = 1.5;
        CHECK_THROWS_AS(tail_bound(env, WeightProfile::constant(1.0), 1.0, 0.0, g), DivergenceError);
        CHECK_THROWS_AS(tail_bound(DecayEnvelope::polynomial(), WeightProfile::constant(1.0), 1.0),
                        DivergenceError);
    }

    TEST_CASE("(c1) closed form: eps = 0.01, alpha = 1/2, C = 1 gives margin 0.2") {
        const Model m = build_model("scalar_tanh", {{"eps", 0.01}});
        const auto b = make_kernel(m, fine());
        const KernelQuadrature kq(*b.gk, m, fine());
        const auto c = holder_x_condition(m, kq, 1.0, 0.5, DeltaKind::delta1);
        CHECK(c.tag == "c1");
        CHECK(std::abs(c.margin - 0.2) <= 1e-12);
        CHECK(c.pass);
    }

    TEST_CASE("Hoelder condition tags and validation") {
        CHECK(holder_tag(DeltaKind::delta1, TimeKind::continuous) == "c1");
        CHECK(holder_tag(DeltaKind::delta2, TimeKind::continuous) == "c2");
        CHECK(holder_tag(DeltaKind::sigma, TimeKind::continuous) == "c3");
        CHECK(holder_tag(DeltaKind::delta3, TimeKind::continuous) == "c44");
        CHECK(holder_tag(DeltaKind::delta1, TimeKind::discrete) == "c1d");
        CHECK(holder_tag(DeltaKind::delta3, TimeKind::discrete) == "c4d");
        const Model m = build_model("scalar_tanh");
        const auto b = make_kernel(m, QuadConfig{});
        const KernelQuadrature kq(*b.gk, m, QuadConfig{});
        CHECK_THROWS_AS(holder_x_condition(m, kq, 1.0, 1.5, DeltaKind::delta1), ValidationError);
        CHECK_THROWS_AS(holder_x_condition(m, kq, 0.0, 0.5, DeltaKind::delta1), ValidationError);
        CHECK_THROWS_AS(holder_x_condition(m, kq, 1.0, 0.5, DeltaKind::sigma), ValidationError);
    }

    TEST_CASE("Hoelder margin decreases as eps grows") {
        double prev = std::numeric_limits<double>::infinity();
        for (double eps : {0.005, 0.01, 0.05, 0.1}) {
            const Model m = build_model("scalar_tanh", {{"eps", eps}});
            const auto b = make_kernel(m, QuadConfig{});
            const KernelQuadrature kq(*b.gk, m, QuadConfig{});
            const double margin = holder_x_condition(m, kq, 1.0, 0.5, DeltaKind::delta2).margin;
            CHECK(margin < prev);
            prev = margin;
        }
    }

    TEST_CASE("corollary arithmetic is exact") {
        const DichotomyData unit{};
        const auto pass = dichotomy_corollary_check(unit, 1.0, 0.4, 0.5, 1.0);
        const auto* e = pass.find("epcon");
        CHECK(e->lhs == 0.8);
        CHECK(e->pass);
        const auto fail = dichotomy_corollary_check(unit, 1.0, 0.6, 0.5, 1.0);
        CHECK(fail.find("epcon")->lhs == 1.2);
        CHECK_FALSE(fail.find("epcon")->pass);
        CHECK(pass.alpha_bounds.at("epcon1") == 1.0);
        CHECK(pass.alpha_bounds.at("epcon4") == doctest::Approx(1.0 / 1.4));
        CHECK_FALSE(pass.find("cor2cond1")->admissible);
        CHECK(pass.find("cor2cond1")->note == "M2 not given");
    }

    TEST_CASE("corollary: alpha beyond the admissible bound") {
        const auto r = dichotomy_corollary_check(DichotomyData{}, 1.0, 0.01, 0.99, 1.0, 2.0);
        CHECK(r.alpha_bounds.at("cor2cond1") == 0.5);
        CHECK_FALSE(r.find("cor2cond1")->admissible);
        CHECK(std::isnan(r.find("cor2cond1")->lhs));
        CHECK(r.find("epcon1")->admissible);
    }

    TEST_CASE("default sup grids") {
        QuadConfig q;
        CHECK(default_tau_grid(build_model("scalar_tanh"), q, 10.0) == std::vector<double>{0.0});
        q.tau_count = 4;
        const auto per = default_tau_grid(build_model("periodic_tanh"), q, 10.0);
        REQUIRE(per.size() == 4);
        CHECK(per[1] == doctest::Approx(M_PI / 2.0));
        const auto lin = default_tau_grid(build_model("coppel"), q, 10.0);
        CHECK(lin.front() == -30.0);
        CHECK(lin.back() == 30.0);
        q.taus = {1.0, 2.0};
        CHECK(default_tau_grid(build_model("coppel"), q, 10.0) == q.taus);
    }

    TEST_CASE("truncation radius respects fixed L and the window") {
        QuadConfig q;
        q.L = 12.0;
        CHECK(resolve_truncation(build_model("scalar_tanh"), q) == 12.0);
        q.L = 50.0;
        CHECK_THROWS_AS(resolve_truncation(build_model("scalar_tanh"), q), ValidationError);
        q.L.reset();
        q.tol = 1e-8;
        const double L8 = resolve_truncation(build_model("scalar_tanh"), q);
        q.tol = 1e-4;
        CHECK(resolve_truncation(build_model("scalar_tanh"), q) < L8);
    }

    TEST_CASE("quadrature range must fit in the window") {
        QuadConfig q;
        q.taus = {34.0};
        q.L = 4.0;
        q.window = 38.0;
        const Model m = build_model("coppel");
        const auto b = make_kernel(m, q);
        CHECK_NOTHROW(KernelQuadrature(*b.gk, m, q));
        q.taus = {34.5};
        CHECK_THROWS_AS(KernelQuadrature(*b.gk, m, q), ValidationError);
    }
}

#include <doctest.h>

#include "lin/delta.hpp"
#include "lin/error.hpp"
#include "lin/systems.hpp"

using namespace lin;

TEST_SUITE("systems") {
    TEST_CASE("every catalog entry builds with defaults and honours its envelopes") {
        for (const auto& e : catalog()) {
            CAPTURE(e.name);
            const Model m = build_model(e.name);
            CHECK(m.sys.name == e.name);
            CHECK(m.catalog_name == e.name);
            CHECK(m.params.size() == e.params.size());
            const auto rep = envelope_check(m.sys, 400, 3);
            CHECK(rep.violations.empty());
            if (m.sys.period) CHECK(rep.period_defect <= 1e-12);
        }
    }

    TEST_CASE("unknown names and out-of-range parameters are rejected") {
        CHECK_THROWS_AS(build_model("no_such_system"), CatalogError);
        CHECK_THROWS_AS(build_model("scalar_tanh", {{"eps", 7.0}}), ValidationError);
        CHECK_THROWS_AS(build_model("scalar_tanh", {{"bogus", 1.0}}), ValidationError);
        CHECK_THROWS_AS(build_model("zero_f", {{"dim", 1.5}}), ValidationError);
    }

    TEST_CASE("parameters reach the model") {
        const Model m = build_model("scalar_tanh", {{"eps", 0.25}});
        CHECK(m.params.at("eps") == 0.25);
        CHECK(m.sys.eps_sup() == doctest::Approx(0.25));
        CHECK(m.sys.A(0.0)(0, 0) == -1.0);
    }

    TEST_CASE("discrete inverses undo the forward maps") {
        const Model m = build_model("d_saddle_tanh", {{"b", 1.5}});
        const Mat a = m.sys.A(3.0), ai = m.sys.A_inv(3.0);
        CHECK((a * ai - Mat::Identity(2, 2)).norm() <= 1e-15);
        Vec y(1);
        y << 0.7;
        CHECK(std::abs(m.sys.g_inv(0.0, m.sys.g(0.0, y))[0] - 0.7) <= 1e-15);
    }

    TEST_CASE("delta envelope closed forms") {
        DeltaConstants c;
        c.K1 = 2.0;
        c.K2 = 3.0;
        c.a1 = 0.5;
        c.a2 = 0.25;
        c.eps = 0.1;
        c.M2 = 0.2;
        const auto d2 = delta_bounds(c, DeltaKind::delta2);
        CHECK(d2.P_ge == 2.0);
        CHECK(d2.R_ge == doctest::Approx(0.7));
        CHECK(d2.P_lt == 3.0);
        CHECK(d2.R_lt == doctest::Approx(0.55));
        CHECK(d2(1.0, 0.0) == doctest::Approx(2.0 * std::exp(0.7)));
        const auto d3 = delta_bounds(c, DeltaKind::delta3);
        CHECK(d3.P_ge == 2.0);
        CHECK(d3.R_ge == doctest::Approx(0.5 + 0.2));
        const auto sg = delta_bounds(c, DeltaKind::sigma);
        CHECK(sg.R_ge == 0.2);
        CHECK(sg.R_lt == 0.2);
        DeltaConstants missing;
        CHECK_THROWS_AS(delta_bounds(missing, DeltaKind::delta2), ValidationError);
        CHECK(parse_delta_kind(delta_kind_name(DeltaKind::delta3)) == DeltaKind::delta3);
    }
}

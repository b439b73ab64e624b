#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "lin/error.hpp"
#include "lin/holder.hpp"

using namespace lin;

TEST_SUITE("holder") {
    TEST_CASE("trajectory gaps stay under the separation envelopes") {
        const Model m = build_model("saddle_tanh", {{"eps", 0.1}, {"kappa", 0.5}, {"beta", 0.5}});
        for (DeltaKind k : {DeltaKind::delta1, DeltaKind::delta2, DeltaKind::delta3, DeltaKind::sigma}) {
            CAPTURE(delta_kind_name(k));
            const auto e = envelope_empirical_check(m, k, 30, 2.0, 1, 0.01);
            CHECK(e.pairs == 30);
            CHECK(e.max_ratio > 0.0);
            CHECK(e.max_ratio <= 1.0 + 1e-3);
        }
    }

    TEST_CASE("discrete envelopes") {
        const Model m = build_model("d_saddle_tanh", {{"eps", 0.05}, {"kappa", 0.5}, {"b", 1.5}});
        for (DeltaKind k : {DeltaKind::delta2, DeltaKind::delta3, DeltaKind::sigma}) {
            CAPTURE(delta_kind_name(k));
            const auto e = envelope_empirical_check(m, k, 30, 3.0, 2);
            CHECK(e.max_ratio <= 1.0 + 1e-9);
        }
    }

    TEST_CASE("envelope checks need the constants") {
        const Model m = build_model("rotation_decay_3d");
        CHECK_THROWS_AS(envelope_empirical_check(m, DeltaKind::delta2, 10, 1.0, 1), ValidationError);
    }

    TEST_CASE("solved tables obey a passing Hoelder condition") {
        const Model m = build_model("scalar_tanh", {{"eps", 0.01}});
        SolveConfig cfg;
        cfg.residual_samples = 2000;
        const auto p = solve_pair(m, box_grid(m, 401, 2), cfg);
        for (TableKind t : {TableKind::h, TableKind::hbar}) {
            const auto r = empirical_holder(p, HolderAxis::x, t, 1.0, 0.5, 300, 4);
            CAPTURE(table_kind_name(t));
            CHECK(r.samples == 300);
            CHECK(r.violations == 0);
            CHECK(r.max_ratio <= 1.0);
            CHECK(r.min_separation >= 10.0 * p.h.x_axis(0).step() - 1e-12);
            CHECK(r.c_prime > r.C);
        }
    }

    TEST_CASE("quotients above C are counted as violations") {
        const Model m = build_model("scalar_tanh", {{"eps", 0.5}});
        SolveConfig cfg;
        cfg.residual_samples = 500;
        const auto p = solve_pair(m, box_grid(m, 201, 2), cfg);
        const auto r = empirical_holder(p, HolderAxis::x, TableKind::h, 0.01, 0.9, 300, 4);
        CHECK(r.violations > 0);
        CHECK(r.max_ratio > r.C);
        const std::string path = "holder_pairs_test.csv";
        r.write_csv(path);
        std::ifstream is(path);
        std::string header;
        std::getline(is, header);
        CHECK(header == "delta_norm,h_gap_norm,ratio,clamped_flag");
        std::remove(path.c_str());
    }

    TEST_CASE("names") {
        CHECK(holder_axis_name(HolderAxis::joint) == "joint");
        CHECK(table_kind_name(TableKind::hbar) == "hbar");
    }
}

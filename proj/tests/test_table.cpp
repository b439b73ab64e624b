#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "lin/error.hpp"
#include "lin/table.hpp"

using namespace lin;

namespace {

// Multilinear in (t, x0, x1, y0): reproduced exactly by the interpolant.
double bilin(double t, double x0, double x1, double y0) {
    return 0.5 + 2.0 * t - x0 + 0.25 * x1 * y0 + 0.75 * t * x0 * x1 - y0;
}

FunctionTable filled_table() {
    FunctionTable tab(Axis{-1.0, 2.0, 4}, {Axis{-1.0, 1.0, 5}, Axis{0.0, 3.0, 7}}, {Axis{-2.0, 2.0, 3}}, 2);
    for (std::size_t i = 0; i < tab.node_count(); ++i) {
        double t;
        Vec x, y;
        tab.node(i, t, x, y);
        Vec v(2);
        v << bilin(t, x[0], x[1], y[0]), -3.0 * x[0];
        tab.set_value(i, v);
    }
    return tab;
}

}  // namespace

TEST_SUITE("table") {
    TEST_CASE("axis location") {
        const Axis a{0.0, 1.0, 11};
        auto hit = locate(a, 0.35);
        CHECK(hit.i0 == 3);
        CHECK(hit.frac == doctest::Approx(0.5));
        CHECK_FALSE(hit.clamped);
        hit = locate(a, 1.0);
        CHECK(hit.i0 + hit.frac == doctest::Approx(10.0));
        CHECK_FALSE(hit.clamped);
        hit = locate(a, 1.5);
        CHECK(hit.clamped);
        hit = locate(Axis{2.0, 2.0, 1}, 7.0);
        CHECK(hit.i0 == 0);
        CHECK_FALSE(hit.clamped);
    }

    TEST_CASE("multilinear functions are reproduced at random points") {
        const auto tab = filled_table();
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> ut(-1, 2), u0(-1, 1), u1(0, 3), uy(-2, 2);
        for (int i = 0; i < 500; ++i) {
            Vec x(2), y(1);
            const double t = ut(rng);
            x << u0(rng), u1(rng);
            y << uy(rng);
            bool clamped = true;
            const Vec v = tab.eval(t, x, y, &clamped);
            CHECK_FALSE(clamped);
            CHECK(v[0] == doctest::Approx(bilin(t, x[0], x[1], y[0])).epsilon(1e-12));
            CHECK(v[1] == doctest::Approx(-3.0 * x[0]).epsilon(1e-12));
            double out[2];
            tab.eval_into(t, x.data(), y.data(), out);
            CHECK(out[0] == v[0]);
            CHECK(out[1] == v[1]);
        }
    }

    TEST_CASE("clamping to the nearest face") {
        const auto tab = filled_table();
        Vec x(2), y(1), xc(2);
        x << 3.0, 1.0;
        xc << 1.0, 1.0;
        y << 0.5;
        bool clamped = false, tclamped = false;
        const Vec v = tab.eval(0.5, x, y, &clamped, &tclamped);
        CHECK(clamped);
        CHECK_FALSE(tclamped);
        CHECK(v[0] == doctest::Approx(tab.eval(0.5, xc, y)[0]));
        tab.eval(5.0, xc, y, &clamped, &tclamped);
        CHECK_FALSE(clamped);
        CHECK(tclamped);
        CHECK_FALSE(tab.inside(x, y));
        CHECK(tab.inside(xc, y));
    }

    TEST_CASE("index maps are inverse") {
        const auto tab = filled_table();
        for (std::size_t i = 0; i < tab.node_count(); i += 7) CHECK(tab.flat_index(tab.multi_index(i)) == i);
        CHECK(tab.node_count() == 4u * 5u * 7u * 3u);
    }

    TEST_CASE("sup norm and Lipschitz constant") {
        FunctionTable tab(Axis{}, {Axis{-1.0, 1.0, 21}}, {}, 1);
        for (std::size_t i = 0; i < tab.node_count(); ++i) {
            double t;
            Vec x, y;
            tab.node(i, t, x, y);
            tab.set_value(i, Vec::Constant(1, 3.0 * x[0] - 1.0));
        }
        CHECK(tab.sup_norm() == doctest::Approx(4.0));
        CHECK(tab.lipschitz_xy() == doctest::Approx(3.0));
    }

    TEST_CASE("binary round trip is exact and CSV has the documented header") {
        const auto tab = filled_table();
        const std::string bin = "table_roundtrip.bin", csv = "table_roundtrip.csv";
        tab.write_binary(bin);
        const auto back = FunctionTable::read_binary(bin);
        CHECK(back.data() == tab.data());
        CHECK(back.node_count() == tab.node_count());
        CHECK(back.x_axis(1).hi == 3.0);
        tab.write_csv(csv);
        std::ifstream is(csv);
        std::string header;
        std::getline(is, header);
        CHECK(header == "t,x1,x2,y1,h1,h2");
        std::size_t rows = 0;
        for (std::string line; std::getline(is, line);) ++rows;
        CHECK(rows == tab.node_count());
        std::remove(bin.c_str());
        std::remove(csv.c_str());
        std::ofstream bad("table_bad.bin");
        bad << "NOTATABLE";
        bad.close();
        CHECK_THROWS_AS(FunctionTable::read_binary("table_bad.bin"), ValidationError);
        std::remove("table_bad.bin");
    }

    TEST_CASE("malformed axes are rejected") {
        CHECK_THROWS_AS(FunctionTable(Axis{}, {Axis{1.0, 0.0, 5}}, {}, 1), ValidationError);
        CHECK_THROWS_AS(FunctionTable(Axis{}, {Axis{0.0, 1.0, 0}}, {}, 1), ValidationError);
    }
}

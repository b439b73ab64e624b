#include <doctest.h>

#include "lin/error.hpp"
#include "lin/examples.hpp"

using namespace lin;

TEST_SUITE("examples") {
    TEST_CASE("every package reproduces its expected pattern") {
        for (const auto& name : example_names()) {
            CAPTURE(name);
            const auto pkg = load_example(name);
            CHECK_FALSE(pkg.expected.empty());
            const auto rep = run_example(pkg, QuadConfig{});
            CHECK(rep.ok());
            CHECK(rep.checks.size() == pkg.expected.size());
        }
    }

    TEST_CASE("short names resolve") {
        CHECK(load_example("E3").name == "E3_saddle_dichotomy");
        CHECK_THROWS_AS(load_example("E9"), CatalogError);
    }

    TEST_CASE("saddle pattern flips with eps") {
        const auto rep = run_example(load_example("E3"), QuadConfig{});
        CHECK(rep.find("epcon[eps=0.4]")->observed);
        CHECK_FALSE(rep.find("epcon[eps=0.6]")->observed);
        CHECK_FALSE(rep.find("epcon1[eps=0.4]")->observed);
        CHECK(rep.find("epcon1[eps=0.001]")->observed);
    }

    TEST_CASE("discrete kernel bound ratio") {
        const double r = e2_kernel_ratio(build_model("d_rotation_decay_3d"), 30);
        CHECK(r > 0.0);
        CHECK(r <= 1.0 + 1e-12);
    }
}

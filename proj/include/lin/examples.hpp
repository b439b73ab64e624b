#pragma once

// Ready-made (system, kernel, expected checks) packages.

#include <string>
#include <vector>

#include "lin/green.hpp"

namespace lin {

struct ExpectedCheck {
    std::string tag;
    bool expect_pass;
};

struct ExamplePackage {
    std::string name;
    Model model;
    std::vector<ExpectedCheck> expected;
    std::string notes;
};

struct ExampleCheck {
    std::string tag;
    bool expected = false;
    bool observed = false;
    double value = 0.0;
    std::string note;
    bool ok() const { return expected == observed; }
};

struct ExampleReport {
    std::string name;
    std::vector<ExampleCheck> checks;
    HypothesisReport hypothesis;  // quadrature conditions on the package's own model

    bool ok() const;
    const ExampleCheck* find(const std::string& tag) const;
};

const std::vector<std::string>& example_names();

/// Throws CatalogError for unknown names.
ExamplePackage load_example(const std::string& name);

/// Runs every expected check of the package with the given numerics.
ExampleReport run_example(const ExamplePackage& pkg, const QuadConfig& numerics = {});

/// max over |m|, |n| <= radius of |G(m,n)| / (1 + n^2) for the discrete package E2.
double e2_kernel_ratio(const Model& m, long radius);

}  // namespace lin

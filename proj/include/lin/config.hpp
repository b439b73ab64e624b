#pragma once

// JSON run configuration shared by every CLI command. All numerics defaults
// live in RunConfig's member initializers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lin/conjugacy.hpp"

namespace lin {

struct SystemSelection {
    std::string catalog;  // catalog entry name
    Params params;
    std::string example;  // example package name (instead of catalog)
};

struct KernelOverride {
    std::optional<ExpRate> forward;
    std::optional<ExpRate> backward;
    bool envelope_set = false;
    std::optional<DichotomyData> dichotomy;
};

struct GridConfig {
    int nx = 41;
    int ny = 3;
    std::optional<double> x_half;
    std::optional<double> y_half;
    std::optional<Axis> tau;  // ignored for autonomous systems
};

struct HolderConfig {
    std::vector<double> C{1.0};
    std::vector<double> alpha{0.5};
    std::size_t samples = 1000;
    std::size_t pairs = 200;
    double horizon = 3.0;
};

struct VerifyConfig {
    std::size_t samples = 500;
    double horizon = 2.0;
};

struct OracleConfig {
    std::size_t probes = 50;
    int K = 40;
};

struct RunConfig {
    SystemSelection system;
    KernelOverride kernel;
    QuadConfig numerics;
    GridConfig grid;
    int max_sweeps = 100;
    std::size_t residual_samples = 20000;
    HolderConfig holder;
    VerifyConfig verify;
    OracleConfig oracle;
    std::uint64_t seed = 1;
    std::string output = "out";
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Fully resolved configuration (defaults filled in).
nlohmann::json to_json(const RunConfig& c);

Model resolve_model(const RunConfig& c);
GridSpec resolve_grid(const Model& m, const RunConfig& c);
SolveConfig resolve_solve(const RunConfig& c);

}  // namespace lin

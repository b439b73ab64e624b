#pragma once

// Linearizing conjugacies H = (x + h, y) and its inverse H̄ = (x + h̄, y):
// h by Picard iteration of the Green-kernel operator on a grid table, h̄ by
// direct quadrature (or summation) along the coupled flow, plus the checks
// of the inverse and solution-mapping identities.

#include <cstdint>
#include <string>
#include <vector>

#include "lin/green.hpp"
#include "lin/table.hpp"

namespace lin {

struct GridSpec {
    Axis tau;
    std::vector<Axis> x;
    std::vector<Axis> y;
};

/// Grid with nx nodes per x axis and ny per y axis over the model's box;
/// tau is the constant axis {0} for autonomous systems, else `tau`.
GridSpec box_grid(const Model& m, int nx, int ny, Axis tau = {});

struct SolveConfig {
    QuadConfig quad;
    int max_sweeps = 100;
    std::size_t residual_samples = 20000;  // cell centres used for the a-posteriori budget
    std::uint64_t seed = 1;
};

struct SolveInfo {
    int sweeps = 0;
    std::vector<double> deltas;  // sup node change per sweep
    double q_value = 0.0;
    double N_value = 0.0;
    double L = 0.0;
    double tail = 0.0;            // truncation bound of the operator (mu-weighted)
    double node_residual = 0.0;   // q * last delta
    double cell_residual = 0.0;   // max sampled |T(Ih)(p) - Ih(p)| (h) or |h̄(p) - Ih̄(p)| (h̄)
    std::size_t cells_sampled = 0;
    double error_budget = 0.0;    // sup |table - exact| estimate
    double sup_norm = 0.0;
    bool tau_clamped = false;     // some quadrature node read the table outside its tau axis
};

struct ConjugacyPair {
    Model model;
    SolveConfig config;
    FunctionTable h;
    FunctionTable hbar;
    SolveInfo h_info;
    SolveInfo hbar_info;

    bool discrete() const { return model.sys.discrete(); }
};

/// N and q on the quadrature used by the solver (throws HypothesisError when q >= 1).
/// With a table tau axis the sup also runs over its nodes.
HypothesisReport solver_hypothesis(const Model& m, const SolveConfig& cfg, const Axis* tau = nullptr);

FunctionTable solve_h(const Model& m, const GridSpec& grid, const SolveConfig& cfg, SolveInfo* info = nullptr);
FunctionTable compute_hbar(const Model& m, const GridSpec& grid, const SolveConfig& cfg, SolveInfo* info = nullptr);
FunctionTable solve_h_discrete(const Model& m, const GridSpec& grid, const SolveConfig& cfg,
                               SolveInfo* info = nullptr);
FunctionTable compute_hbar_discrete(const Model& m, const GridSpec& grid, const SolveConfig& cfg,
                                    SolveInfo* info = nullptr);

/// Both tables, continuous or discrete according to the model.
ConjugacyPair solve_pair(const Model& m, const GridSpec& grid, const SolveConfig& cfg);

enum class Direction { forward, inverse };

/// forward: (x + h(t,x,y), y); inverse: (x + h̄(t,x,y), y).
FlowState eval_conjugacy(const ConjugacyPair& p, double t, const Vec& x, const Vec& y, Direction dir,
                         bool* clamped = nullptr);

struct OracleResult {
    Vec value;
    double radius = 0.0;  // q^K N + tail / (1 - q)
    int K = 0;
    long L = 0;
};

/// Pointwise Picard iteration of the exact sum map along exact orbits, no
/// grid: u_m = sum_k G(m,k) f_{k-1}(o_{k-1} + u_{k-1}, y_{k-1}) on a window
/// n +- K L, returned at m = n.
OracleResult brute_force_h_discrete(const Model& m, long n, const Vec& xi, const Vec& eta, int K, long L,
                                    double q_value, double N_value);

/// max over table nodes t with t + T0 also on the axis and t >= settle of
/// |h(t + T0, x, y) - h(t, x, y)|. `settle` excludes the left edge, where
/// tau clamping of the table is still felt.
double periodicity_defect(const FunctionTable& h, double T0, double settle);

struct InverseSample {
    double t;
    Vec x, y;
    double defect_h_hbar;  // |H(t, H̄(t,x,y)) - (x,y)|
    double defect_hbar_h;  // |H̄(t, H(t,x,y)) - (x,y)|
    bool clamped;
};

struct InverseReport {
    std::size_t samples = 0;
    std::size_t clamped = 0;
    double max_defect = 0.0;      // over non-clamped samples
    double max_defect_all = 0.0;  // including clamped ones
    double budget = 0.0;
    double lip_h = 0.0;
    double lip_hbar = 0.0;
    std::vector<InverseSample> rows;

    bool pass() const { return max_defect <= budget; }
    void write_csv(const std::string& path) const;
};

InverseReport verify_inverse(const ConjugacyPair& p, std::size_t samples, std::uint64_t seed);

struct MappingReport {
    std::size_t samples = 0;
    std::size_t clamped = 0;
    double horizon = 0.0;
    double max_defect_h = 0.0;     // H carries linear solutions onto nonlinear ones
    double max_defect_hbar = 0.0;  // H̄ carries nonlinear solutions onto linear ones
    double max_budget_h = 0.0;
    double max_budget_hbar = 0.0;
    double max_excess = 0.0;       // max over samples of defect - budget (<= 0 passes)
    double max_ode_error = 0.0;    // 0 for discrete systems

    bool pass() const { return max_excess <= 0.0; }
};

/// Horizon in time units (continuous) or steps (discrete).
MappingReport verify_mapping(const ConjugacyPair& p, std::size_t samples, double horizon, std::uint64_t seed);

}  // namespace lin

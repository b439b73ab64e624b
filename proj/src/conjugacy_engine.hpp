#pragma once

// Shared machinery of the h / h̄ solvers: per-tau caches of quadrature nodes,
// weighted kernel values and linear evolution, trajectory paths, and
// pointwise application of the integral operators.

#include <memory>
#include <vector>

#include "lin/conjugacy.hpp"
#include "lin/flow.hpp"

namespace lin::detail {

struct Side {
    std::vector<double> s;  // time at which h, f and y are read
    std::vector<double> G;  // weighted kernel, component (r,c) at G[(r*d + c)*n + j]
    std::vector<Mat> T;     // linear evolution from tau to s
};

struct TauCache {
    double tau = 0.0;
    Side fwd;  // s <= tau
    Side bwd;  // s > tau
};

struct Paths {
    std::vector<Vec> fwd_x, bwd_x, fwd_y, bwd_y;
};

class Engine {
public:
    Engine(const Model& m, const SolveConfig& cfg, double tau_lo, double tau_hi);

    bool discrete() const { return discrete_; }
    double L() const { return L_; }
    double tail() const { return tail_; }

    TauCache cache(double tau) const;

    /// y along the nodes of both sides (and x of the coupled flow when coupled).
    void paths(const TauCache& c, const Vec& xi, const Vec& eta, bool coupled, Paths& p) const;

    /// T(h)(tau, xi, eta) with y taken from p.
    void apply_h(const TauCache& c, const Vec& xi, const Paths& p, const FunctionTable& h, double* out) const;

    /// h̄(tau, xi, eta) from the coupled paths in p.
    void apply_hbar(const TauCache& c, const Paths& p, double* out) const;

    /// Whether some node of the cache reads outside [lo, hi] in time.
    static bool outside(const TauCache& c, double lo, double hi);

private:
    void accumulate(const Side& sd, const std::vector<double>& F, double* out) const;

    const Model& m_;
    const SolveConfig& cfg_;
    bool discrete_;
    int d_;
    double L_ = 0.0;
    long n_ = 0;  // continuous: Simpson intervals per side; discrete: L
    double tail_ = 0.0;
    std::shared_ptr<EvolutionFamily> ef_;
    std::shared_ptr<Cocycle> cocycle_;
    OdeConfig ode_;
    mutable std::vector<double> F_;
};

}  // namespace lin::detail

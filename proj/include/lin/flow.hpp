#pragma once

// Evolution family T(t,s) of x' = A(t)x, solution maps of the uncoupled and
// coupled systems, and the discrete cocycle / orbits.

#include <vector>

#include "lin/linalg.hpp"
#include "lin/systems.hpp"

namespace lin {

/// Fundamental matrices Phi(t) = T(t,0) and Psi(t) = T(0,t) cached on the
/// grid t_k = k h over [-t_max, t_max] (fixed-step RK4, Psi from the adjoint
/// equation Psi' = -Psi A). Off-grid times take one RK4 step from the nearest
/// grid point below. T(t,s) = Phi(t) Psi(s), with T(t,t) = I exactly.
///
/// Built once, then read-only; safe for concurrent readers.
class EvolutionFamily {
public:
    EvolutionFamily(MatFn a, int dim, double h_ode, double t_max);

    int dim() const { return dim_; }
    double step() const { return h_; }
    double window() const { return t_max_; }

    Mat phi(double t) const;
    Mat psi(double t) const;
    Mat operator()(double t, double s) const;

    /// True when t is a grid time up to rounding; k receives its index.
    bool on_grid(double t, long& k) const;

private:
    void check(double t) const;

    MatFn a_;
    int dim_;
    double h_;
    double t_max_;
    long n_;  // grid indices run over [-n_, n_]
    std::vector<Mat> phi_;
    std::vector<Mat> psi_;
};

/// T(t,s); throws DomainError outside the window.
Mat evolve_linear(const EvolutionFamily& ef, double t, double s);

struct FlowState {
    Vec x;
    Vec y;
};

/// Integration settings shared by the coupled/drift solvers.
struct OdeConfig {
    double h_ode = 1e-3;
    double window = 40.0;
};

/// (x1(t,tau,xi), y(t,tau,eta)): x1 from the evolution family, y by RK4.
FlowState solve_uncoupled(const CoupledSystem& sys, const EvolutionFamily& ef, double tau, const Vec& xi,
                          const Vec& eta, double t);

/// (x2(t,tau,xi,eta), y(t,tau,eta)) by RK4 on the full coupled system.
FlowState solve_coupled(const CoupledSystem& sys, const OdeConfig& cfg, double tau, const Vec& xi, const Vec& eta,
                        double t);

/// (x1, y) by RK4 on x' = A(t)x, y' = g(t,y) (no evolution-family cache).
FlowState solve_linear(const CoupledSystem& sys, const OdeConfig& cfg, double tau, const Vec& xi, const Vec& eta,
                       double t);

/// y(t,tau,eta) for y' = g(t,y).
Vec solve_drift(const CoupledSystem& sys, const OdeConfig& cfg, double tau, const Vec& eta, double t);

/// Coupled (or, with coupled=false, drift-only with x frozen) trajectory from
/// tau in direction sign(dir) recorded every `stride` RK4 steps of size h_ode:
/// out[j] is the state at tau + dir * j * stride * h_ode, j = 0..count-1.
void record_trajectory(const CoupledSystem& sys, const OdeConfig& cfg, double tau, const Vec& xi, const Vec& eta,
                       int dir, int stride, std::size_t count, bool coupled, std::vector<FlowState>& out);

/// One classical RK4 step of the coupled system.
void rk4_step(const CoupledSystem& sys, double t, double h, Vec& x, Vec& y, bool coupled);

/// Discrete cocycle A(m,n): products A_{m-1}...A_n (m > n), I (m = n),
/// inverse products A_m^{-1}...A_{n-1}^{-1} (m < n). Operators and inverses
/// are memoized over [-window, window].
class Cocycle {
public:
    Cocycle(const CoupledSystem& sys, long window);

    long window() const { return window_; }
    int dim() const { return dim_; }
    const Mat& A(long n) const;
    const Mat& A_inv(long n) const;
    Mat operator()(long m, long n) const;

private:
    void check(long n) const;

    long window_;
    int dim_;
    std::vector<Mat> a_;
    std::vector<Mat> a_inv_;
};

Mat cocycle_eval(const Cocycle& c, long m, long n);

/// Orbit value at index m of the orbit through `state` at index n.
/// coupled=false follows x_{n+1} = A_n x_n; coupled=true adds f_n(x_n,y_n).
/// Backward coupled steps solve x = A_n^{-1}(x_{n+1} - f_n(x, y_n)) by
/// fixed-point iteration; ConvergenceError if it does not contract.
FlowState orbit(const CoupledSystem& sys, long n, const FlowState& state, long m, bool coupled);

/// One backward step of the coupled discrete system.
Vec backward_step(const CoupledSystem& sys, long k, const Vec& x_next, const Vec& y_k, const Mat& a_inv);

}  // namespace lin

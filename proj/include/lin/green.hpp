#pragma once

// Green kernel G(t,s) = T(t,s)P(s) (t >= s), -T(t,s)(I - P(s)) (t < s), the
// hypothesis quantities N and q, the existence and Hoelder conditions with
// their discrete forms, and closed-form checks under an exponential dichotomy.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lin/delta.hpp"
#include "lin/flow.hpp"
#include "lin/systems.hpp"

namespace lin {

class GreenKernel {
public:
    GreenKernel(std::shared_ptr<const EvolutionFamily> ef, Projection p, DecayEnvelope env);

    Mat operator()(double t, double s) const;

    /// The branch t >= s (resp. t < s) is not identically zero.
    bool forward_live() const { return proj_.kind != ProjKind::zero; }
    bool backward_live() const { return proj_.kind != ProjKind::identity; }

    const EvolutionFamily& family() const { return *ef_; }
    std::shared_ptr<const EvolutionFamily> family_ptr() const { return ef_; }
    const Projection& projection() const { return proj_; }
    const DecayEnvelope& envelope() const { return env_; }

private:
    std::shared_ptr<const EvolutionFamily> ef_;
    Projection proj_;
    DecayEnvelope env_;
};

class DiscreteGreenKernel {
public:
    DiscreteGreenKernel(std::shared_ptr<const Cocycle> c, Projection p, DecayEnvelope env);

    Mat operator()(long m, long n) const;

    bool forward_live() const { return proj_.kind != ProjKind::zero; }
    bool backward_live() const { return proj_.kind != ProjKind::identity; }

    const Cocycle& cocycle() const { return *c_; }
    const Projection& projection() const { return proj_; }
    const DecayEnvelope& envelope() const { return env_; }

private:
    std::shared_ptr<const Cocycle> c_;
    Projection proj_;
    DecayEnvelope env_;
};

Mat green_eval(const GreenKernel& gk, double t, double s);
Mat green_eval(const DiscreteGreenKernel& gk, long m, long n);

/// One branch of the kernel evaluated regardless of the order of (t, s):
/// forward is T(t,s)P(s), backward is -T(t,s)(I - P(s)). Used on the diagonal
/// s = t, where each side of a quadrature needs its own one-sided limit.
Mat green_branch(const EvolutionFamily& ef, const Projection& p, double t, double s, bool forward);
Mat green_branch(const Cocycle& c, const Projection& p, long m, long n, bool forward);

/// Kernel with the spliced projection P+(s) (s >= 0), P-(s) (s < 0) and the
/// piecewise trichotomy envelope.
GreenKernel make_trichotomy_kernel(std::shared_ptr<const EvolutionFamily> ef, const TrichotomyData& td);
Mat trichotomy_green(const GreenKernel& trichotomy_kernel, double t, double s);

/// Numerics shared by every quadrature in this module.
struct QuadConfig {
    double h_ode = 1e-3;
    int stride = 10;          // quadrature spacing = stride * h_ode
    double window = 40.0;     // T_max (continuous) or index window (discrete)
    double tol = 1e-6;        // auto truncation keeps tail <= tol / 3
    std::optional<double> L;  // fixed truncation radius overrides auto
    std::vector<double> taus; // explicit sup grid; empty selects the default
    int tau_count = 41;
};

/// Kernel model built from a Model and numerics.
struct KernelBundle {
    std::shared_ptr<const EvolutionFamily> ef;
    std::shared_ptr<const Cocycle> cocycle;
    std::optional<GreenKernel> gk;
    std::optional<DiscreteGreenKernel> gkd;
};

KernelBundle make_kernel(const Model& m, const QuadConfig& q);

struct ConditionResult {
    std::string tag;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs (after adding the tail)
    double tail = 0.0;
    bool pass = false;
    bool admissible = true;
    bool divergent = false;
    bool certified = true;
    std::string note;
};

struct HypothesisReport {
    bool discrete = false;
    double N_value = 0.0;     // sup of integral |G| mu, tail included
    double q_value = 0.0;     // sup of integral |G| gamma, tail included
    double G_integral = 0.0;  // sup of integral |G| (first half of (r))
    double q_eps = 0.0;       // sup of integral |G| eps (second half of (r))
    double L = 0.0;           // truncation radius actually used
    double tail_N = 0.0;
    double tail_q = 0.0;
    double tau_lo = 0.0;
    double tau_hi = 0.0;
    std::size_t tau_count = 0;
    bool certified = true;
    bool grid_max = true;  // sup over t is a max over the tau grid
    std::vector<ConditionResult> conditions;
    std::map<std::string, double> alpha_bounds;
    std::vector<std::string> warnings;

    const ConditionResult* find(const std::string& tag) const;
};

/// Precomputed |G(tau, s_j)| on Simpson nodes for a tau grid, reused across
/// all weights and growth factors.
class KernelQuadrature {
public:
    KernelQuadrature(const GreenKernel& gk, const Model& m, const QuadConfig& q);
    KernelQuadrature(const DiscreteGreenKernel& gk, const Model& m, const QuadConfig& q);

    struct Result {
        double value = 0.0;  // sup over tau of (integral + tail)
        double integral = 0.0;
        double tail = 0.0;
        double argmax_tau = 0.0;
        bool divergent = false;
        bool certified = true;
    };

    /// sup_tau [ sum_j w_j |G(tau,s_j)| weight(s_j) growth(s_j,tau) + tail ].
    /// For discrete kernels weight is read at k-1 and growth at (k-1, m).
    Result integrate(const ScalarFn& weight, const WeightProfile& profile, const EnvelopeSpec* delta = nullptr,
                     double alpha = 1.0) const;

    bool discrete() const { return discrete_; }
    double L() const { return L_; }
    const std::vector<double>& taus() const { return taus_; }

private:
    struct Side {
        std::vector<double> s;     // nodes
        std::vector<double> w;     // quadrature weights
        std::vector<double> norm;  // |G(tau, s)|
    };
    struct Row {
        double tau;
        Side fwd;  // s <= tau
        Side bwd;  // s > tau
    };

    bool discrete_ = false;
    double L_ = 0.0;
    DecayEnvelope env_;
    std::vector<double> taus_;
    std::vector<Row> rows_;
};

/// Default sup grid: one point for autonomous systems, one period for
/// periodic ones, otherwise tau_count points inside [-(W - L), W - L].
std::vector<double> default_tau_grid(const Model& m, const QuadConfig& q, double L);

/// Truncation radius: q.L if set, else tail(mu) and tail(gamma) <= tol/3,
/// capped at window/2.
double resolve_truncation(const Model& m, const QuadConfig& q);

/// N, q, sup int |G|, sup int |G| eps, plus the "bound"/"r" (or "boundd"/"rd")
/// condition entries.
HypothesisReport hypothesis_N_q(const Model& m, const QuadConfig& q);
HypothesisReport hypothesis_N_q(const Model& m, const KernelQuadrature& kq);

/// margin = C - pref * sup int |G| eps^alpha Delta^alpha(s,t) ds with
/// pref = max{2M,N}(1+C) for Delta_1 and 2M for Delta_2.
ConditionResult holder_x_condition(const Model& m, const KernelQuadrature& kq, double C, double alpha,
                                   DeltaKind delta);

/// Same with sigma (pref max{2M,N}(1+C)) or Delta_3 (pref 2M).
ConditionResult holder_y_condition(const Model& m, const KernelQuadrature& kq, double C, double alpha,
                                   DeltaKind delta);

/// Holder condition with an explicit envelope instead of the model's constants.
ConditionResult holder_condition(const Model& m, const KernelQuadrature& kq, double C, double alpha,
                                 const EnvelopeSpec& env, bool h_table);

/// Closed-form corollary inequalities (no quadrature).
HypothesisReport dichotomy_corollary_check(const DichotomyData& dd, double M, double eps, double alpha, double C,
                                           std::optional<double> M2 = std::nullopt);

/// Condition tag for a Hoelder check in the given time kind.
std::string holder_tag(DeltaKind delta, TimeKind time);

}  // namespace lin

#pragma once

// Coupled systems  x' = A(t)x + f(t,x,y),  y' = g(t,y)  (or their discrete
// counterparts x_{n+1} = A_n x_n + f_n(x_n,y_n), y_{n+1} = g_n(y_n)), the
// projection/decay data of the associated Green kernel, and the parametric
// catalog every concrete system is built from.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lin/envelopes.hpp"
#include "lin/linalg.hpp"

namespace lin {

using MatFn = std::function<Mat(double)>;
using NonlinFn = std::function<Vec(double, const Vec&, const Vec&)>;
using DriftFn = std::function<Vec(double, const Vec&)>;
using ScalarFn = std::function<double(double)>;

enum class TimeKind { continuous, discrete };

/// Sampling box for envelope checks and default conjugacy grids.
struct Box {
    double x_half = 5.0;
    double y_half = 5.0;
    double t_half = 40.0;
};

/// System data. Discrete systems use the same callables with integral t.
struct CoupledSystem {
    std::string name;
    TimeKind time = TimeKind::continuous;
    int dim_x = 1;
    int dim_y = 0;

    MatFn linear_part;
    MatFn linear_inverse;  // discrete only; computed from linear_part when empty
    NonlinFn nonlinearity;
    DriftFn drift;          // empty: g = 0 (continuous) or identity (discrete)
    DriftFn drift_inverse;  // discrete only; required when dim_y > 0 and drift is set

    ScalarFn mu_envelope;
    ScalarFn gamma_envelope;
    ScalarFn eps_envelope;
    WeightProfile mu_profile;
    WeightProfile gamma_profile;
    WeightProfile eps_profile;

    double M_bound = 1.0;
    double N_eps_bound = 1.0;
    std::optional<double> M2_bound;
    std::optional<double> period;
    bool autonomous = false;
    Box box;

    bool discrete() const { return time == TimeKind::discrete; }

    Mat A(double t) const { return linear_part(t); }
    Mat A_inv(double t) const;
    Vec f(double t, const Vec& x, const Vec& y) const;
    Vec g(double t, const Vec& y) const;
    Vec g_inv(double t, const Vec& y) const;
    double mu(double t) const { return mu_envelope(t); }
    double gamma(double t) const { return gamma_envelope(t); }
    double eps(double t) const { return eps_envelope(t); }

    /// sup_t eps(t) as declared by the profile.
    double eps_sup() const { return eps_profile.sup(); }
};

enum class ProjKind { identity, zero, general };

/// Projection family P(t) (or P_n). identity/zero let evaluators skip the
/// branch of the Green kernel that vanishes identically.
struct Projection {
    ProjKind kind = ProjKind::identity;
    int dim = 1;
    MatFn family;  // used only for ProjKind::general

    static Projection identity(int dim);
    static Projection zero(int dim);
    static Projection constant(const Mat& p);
    static Projection general(int dim, MatFn family);

    Mat operator()(double t) const;
};

/// Exponential dichotomy constants together with bounded growth/decay rates.
struct DichotomyData {
    double D1 = 1, D2 = 1, lambda1 = 1, lambda2 = 1;
    double K1 = 1, K2 = 1, a1 = 1, a2 = 1;
};

/// Exponential trichotomy constants; P+ on t >= 0, P- on t < 0.
struct TrichotomyData {
    std::array<double, 4> D{1, 1, 1, 1};
    std::array<double, 4> lambda{1, 1, 1, 1};
    Projection p_plus;
    Projection p_minus;
};

/// Bounded growth/decay constants |T(t,s)| <= K1 e^{a1(t-s)}, |T(s,t)| <= K2 e^{a2(t-s)} (t >= s).
struct GrowthData {
    double K1 = 1, K2 = 1, a1 = 1, a2 = 1;
};

struct KernelSpec {
    Projection projection;
    DecayEnvelope envelope;
    std::optional<DichotomyData> dichotomy;
    std::optional<TrichotomyData> trichotomy;
    std::optional<GrowthData> growth;
};

/// A system together with the kernel data it is studied with.
struct Model {
    CoupledSystem sys;
    KernelSpec kernel;
    std::string notes;
    std::string catalog_name;
    std::map<std::string, double> params;  // resolved catalog parameters
};

using Params = std::map<std::string, double>;

struct ParamSpec {
    std::string name;
    double lo;
    double hi;
    double fallback;
    bool integer = false;
    std::string doc;
};

struct CatalogEntry {
    std::string name;
    TimeKind time;
    std::string doc;
    std::vector<ParamSpec> params;
    std::function<Model(const Params&)> builder;
};

/// All catalog entries, in a fixed order.
const std::vector<CatalogEntry>& catalog();

/// Looks up an entry; throws CatalogError for unknown names.
const CatalogEntry& catalog_entry(const std::string& name);

/// Fills defaults and validates ranges; throws ValidationError.
Params resolve_params(const CatalogEntry& entry, const Params& given);

Model build_model(const std::string& name, const Params& params = {});
CoupledSystem build_system(const std::string& name, const Params& params = {});

struct EnvelopeViolation {
    std::string what;
    double t;
    double ratio;
};

struct EnvelopeCheckReport {
    std::size_t samples = 0;
    double max_ratio_mu = 0;     // |f| / mu(t)
    double max_ratio_gamma = 0;  // |f(x)-f(z)| / (gamma(t)|x-z|)
    double max_ratio_eps = 0;    // |f(x,y)-f(z,w)| / (eps(t)(|x-z|+|y-w|))
    double max_ratio_M = 0;      // |f| / M
    double max_ratio_N = 0;      // eps(t) / N
    double period_defect = 0;    // max |A(t+T0)-A(t)|, |f(t+T0)-f(t)|, |g(..)-g(..)|
    std::vector<EnvelopeViolation> violations;
};

/// Spot-checks the declared envelopes on random points of the working box.
/// A ratio above 1 + 1e-9 is a violation.
EnvelopeCheckReport envelope_check(const CoupledSystem& sys, std::size_t budget, std::uint64_t seed);

}  // namespace lin

#include <cmath>
#include <numbers>

#include "lin/error.hpp"
#include "lin/systems.hpp"

namespace lin {

namespace {

constexpr double kTinyM2 = 1e-9;

ScalarFn constant_fn(double v) {
    return [v](double) { return v; };
}

Mat diag(std::initializer_list<double> d) {
    Mat m = Mat::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
    int i = 0;
    for (double v : d) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

Vec tanh_all(const Vec& x, double scale) {
    Vec r(x.size());
    for (int i = 0; i < x.size(); ++i) r[i] = scale * std::tanh(x[i]);
    return r;
}

void set_constant_envelopes(CoupledSystem& s, double mu, double gamma, double eps) {
    s.mu_envelope = constant_fn(mu);
    s.gamma_envelope = constant_fn(gamma);
    s.eps_envelope = constant_fn(eps);
    s.mu_profile = WeightProfile::constant(mu);
    s.gamma_profile = WeightProfile::constant(gamma);
    s.eps_profile = WeightProfile::constant(eps);
}

DichotomyData uniform_dichotomy(double D, double lambda, double K, double a) {
    return {D, D, lambda, lambda, K, K, a, a};
}

GrowthData growth_of(const DichotomyData& d) { return {d.K1, d.K2, d.a1, d.a2}; }

// ---------------------------------------------------------------- continuous

Model scalar_tanh(const Params& p) {
    const double eps = p.at("eps"), rate = p.at("rate");
    Model m;
    auto& s = m.sys;
    s.name = "scalar_tanh";
    s.dim_x = 1;
    s.dim_y = 1;
    s.linear_part = [rate](double) { return Mat::Constant(1, 1, -rate); };
    s.nonlinearity = [eps](double, const Vec& x, const Vec&) { return tanh_all(x, eps); };
    s.drift = [](double, const Vec& y) { return Vec(Vec::Zero(y.size())); };
    set_constant_envelopes(s, eps, eps, eps);
    s.M_bound = std::max(1.0, eps);
    s.N_eps_bound = std::max(1.0, eps);
    s.M2_bound = kTinyM2;
    s.autonomous = true;
    m.kernel.projection = Projection::identity(1);
    m.kernel.envelope = DecayEnvelope::exponential(ExpRate{1.0, rate}, std::nullopt);
    m.kernel.dichotomy = uniform_dichotomy(1.0, rate, 1.0, rate);
    m.kernel.growth = growth_of(*m.kernel.dichotomy);
    m.notes = "x' = -rate x + eps tanh(x), y' = 0; P = I";
    return m;
}

Model zero_f(const Params& p) {
    const int dim = static_cast<int>(p.at("dim"));
    Model m;
    auto& s = m.sys;
    s.name = "zero_f";
    s.dim_x = dim;
    s.dim_y = 0;
    s.linear_part = [dim](double) { return Mat(-Mat::Identity(dim, dim)); };
    s.nonlinearity = [dim](double, const Vec&, const Vec&) { return Vec(Vec::Zero(dim)); };
    set_constant_envelopes(s, 0.0, 0.0, 0.0);
    s.M2_bound = kTinyM2;
    s.autonomous = true;
    m.kernel.projection = Projection::identity(dim);
    m.kernel.envelope = DecayEnvelope::exponential(ExpRate{1.0, 1.0}, std::nullopt);
    m.kernel.dichotomy = uniform_dichotomy(1.0, 1.0, 1.0, 1.0);
    m.kernel.growth = growth_of(*m.kernel.dichotomy);
    m.notes = "x' = -x, f = 0";
    return m;
}

Model rotation_decay_3d(const Params& p) {
    const double c = p.at("c");
    Model m;
    auto& s = m.sys;
    s.name = "rotation_decay_3d";
    s.dim_x = 3;
    s.dim_y = 0;
    s.linear_part = [](double t) {
        Mat a = Mat::Zero(3, 3);
        a(0, 1) = -1.0;
        a(1, 0) = 1.0;
        a(2, 2) = -2.0 * t / (1.0 + t * t);
        return a;
    };
    const auto w = [c](double t) { return c / ((1.0 + t * t) * (1.0 + t * t)); };
    s.nonlinearity = [w](double t, const Vec& x, const Vec&) { return tanh_all(x, w(t) / std::sqrt(3.0)); };
    s.mu_envelope = w;
    s.gamma_envelope = w;
    s.eps_envelope = w;
    s.mu_profile = WeightProfile::rational_decay(c);
    s.gamma_profile = WeightProfile::rational_decay(c);
    s.eps_profile = WeightProfile::rational_decay(c);
    s.M2_bound = kTinyM2;
    m.kernel.projection = Projection::constant(diag({0, 0, 1}));
    m.kernel.envelope = DecayEnvelope::polynomial();
    m.notes = "rotation block plus x3' = -2t/(1+t^2) x3; no exponential dichotomy; |G(t,s)| <= 1+s^2";
    return m;
}

Model saddle_tanh(const Params& p) {
    const double eps = p.at("eps"), kappa = p.at("kappa"), beta = p.at("beta");
    Model m;
    auto& s = m.sys;
    s.name = "saddle_tanh";
    s.dim_x = 2;
    s.dim_y = 1;
    s.linear_part = [](double) { return diag({-1.0, 1.0}); };
    s.nonlinearity = [eps, kappa](double, const Vec& x, const Vec& y) {
        Vec r(2);
        for (int i = 0; i < 2; ++i) r[i] = eps * std::tanh(x[i] + kappa * y[0]);
        return r;
    };
    s.drift = [beta](double, const Vec& y) { return Vec(-beta * y); };
    const double eps_env = eps * std::max(1.0, kappa * std::sqrt(2.0));
    set_constant_envelopes(s, eps * std::sqrt(2.0), eps, eps_env);
    s.M_bound = std::max(1.0, eps * std::sqrt(2.0));
    s.N_eps_bound = std::max(1.0, eps_env);
    s.M2_bound = std::max(beta, kTinyM2);
    s.autonomous = true;
    m.kernel.projection = Projection::constant(diag({1, 0}));
    m.kernel.envelope = DecayEnvelope::exponential(ExpRate{1.0, 1.0}, ExpRate{1.0, 1.0});
    m.kernel.dichotomy = uniform_dichotomy(1.0, 1.0, 1.0, 1.0);
    m.kernel.growth = growth_of(*m.kernel.dichotomy);
    m.notes = "A = diag(-1, 1), P = diag(1, 0), f_i = eps tanh(x_i + kappa y), y' = -beta y";
    return m;
}

Model periodic_tanh(const Params& p) {
    const double eps = p.at("eps"), amp = p.at("amp");
    Model m;
    auto& s = m.sys;
    s.name = "periodic_tanh";
    s.dim_x = 1;
    s.dim_y = 0;
    s.linear_part = [amp](double t) { return Mat::Constant(1, 1, -1.0 + amp * std::cos(t)); };
    const auto w = [eps](double t) { return eps * (1.0 + 0.5 * std::sin(t)); };
    s.nonlinearity = [w](double t, const Vec& x, const Vec&) { return tanh_all(x, w(t)); };
    s.mu_envelope = w;
    s.gamma_envelope = w;
    s.eps_envelope = w;
    s.mu_profile = WeightProfile::constant(1.5 * eps);
    s.gamma_profile = WeightProfile::constant(1.5 * eps);
    s.eps_profile = WeightProfile::constant(1.5 * eps);
    s.M_bound = std::max(1.0, 1.5 * eps);
    s.N_eps_bound = std::max(1.0, 1.5 * eps);
    s.M2_bound = kTinyM2;
    s.period = 2.0 * std::numbers::pi;
    // T(t,s) = exp(-(t-s) + amp (sin t - sin s))
    const double D = std::exp(2.0 * amp);
    m.kernel.projection = Projection::identity(1);
    m.kernel.envelope = DecayEnvelope::exponential(ExpRate{D, 1.0}, std::nullopt);
    m.kernel.dichotomy = DichotomyData{D, 1.0, 1.0, 1.0, D, D, 1.0, 1.0};
    m.kernel.growth = growth_of(*m.kernel.dichotomy);
    m.notes = "x' = (-1 + amp cos t) x + eps (1 + sin(t)/2) tanh x; period 2 pi";
    return m;
}

Model tanh_trichotomy(const Params& p) {
    const double eps = p.at("eps");
    Model m;
    auto& s = m.sys;
    s.name = "tanh_trichotomy";
    s.dim_x = 2;
    s.dim_y = 0;
    s.linear_part = [](double t) { return diag({-std::tanh(t), -1.0}); };
    s.nonlinearity = [eps](double, const Vec& x, const Vec&) { return tanh_all(x, eps); };
    set_constant_envelopes(s, eps * std::sqrt(2.0), eps, eps);
    s.M_bound = std::max(1.0, eps * std::sqrt(2.0));
    s.N_eps_bound = std::max(1.0, eps);
    s.M2_bound = kTinyM2;
    TrichotomyData td;
    td.D = {2.0, 1.0, 1.0, 2.0};
    td.lambda = {1.0, 1.0, 1.0, 1.0};
    td.p_plus = Projection::identity(2);
    td.p_minus = Projection::constant(diag({0, 1}));
    const Mat pm = diag({0, 1});
    m.kernel.projection = Projection::general(2, [pm](double t) { return t >= 0.0 ? Mat(Mat::Identity(2, 2)) : pm; });
    m.kernel.envelope = DecayEnvelope::trichotomy(
        {ExpRate{td.D[0], td.lambda[0]}, ExpRate{td.D[1], td.lambda[1]}, ExpRate{td.D[2], td.lambda[2]},
         ExpRate{td.D[3], td.lambda[3]}});
    m.kernel.trichotomy = td;
    m.kernel.growth = GrowthData{2.0, 2.0, 1.0, 1.0};
    m.notes = "A = diag(-tanh t, -1): first coordinate stable for t > 0, unstable for t < 0";
    return m;
}

Model coppel(const Params& p) {
    const double eps = p.at("eps"), c = p.at("c");
    Model m;
    auto& s = m.sys;
    s.name = "coppel";
    s.dim_x = 1;
    s.dim_y = 0;
    // phi = 1/(1+psi), psi = c t^2 e^{-t} for t > 0; A = phi'/phi - 1 = -psi'/(1+psi) - 1
    s.linear_part = [c](double t) {
        if (t <= 0.0) return Mat(Mat::Constant(1, 1, -1.0));
        const double e = std::exp(-t);
        const double psi = c * t * t * e;
        const double dpsi = c * (2.0 * t - t * t) * e;
        return Mat(Mat::Constant(1, 1, -dpsi / (1.0 + psi) - 1.0));
    };
    s.nonlinearity = [eps](double, const Vec& x, const Vec&) { return tanh_all(x, eps); };
    set_constant_envelopes(s, eps, eps, eps);
    s.M_bound = std::max(1.0, eps);
    s.N_eps_bound = std::max(1.0, eps);
    s.M2_bound = kTinyM2;
    // 1/phi <= 1 + max psi = 1 + 4c/e^2
    const double D = 1.0 + 4.0 * c / std::exp(2.0);
    m.kernel.projection = Projection::identity(1);
    m.kernel.envelope = DecayEnvelope::exponential(ExpRate{D, 1.0}, std::nullopt);
    m.kernel.growth = GrowthData{D, D, 1.0, 1.0};
    m.kernel.dichotomy = DichotomyData{D, 1.0, 1.0, 1.0, D, D, 1.0, 1.0};
    m.notes = "phi(t) = 1/(1 + c t^2 e^{-t}) (t > 0), 1 (t <= 0); int (1/phi - 1) = 2c; the limit "
              "condition on phi(n)/phi(n - 2^-n) is not enforced";
    return m;
}

// ------------------------------------------------------------------ discrete

Model d_scalar_tanh(const Params& p) {
    const double eps = p.at("eps"), a = p.at("a");
    Model m;
    auto& s = m.sys;
    s.name = "d_scalar_tanh";
    s.time = TimeKind::discrete;
    s.dim_x = 1;
    s.dim_y = 1;
    s.linear_part = [a](double) { return Mat::Constant(1, 1, a); };
    s.linear_inverse = [a](double) { return Mat::Constant(1, 1, 1.0 / a); };
    s.nonlinearity = [eps](double, const Vec& x, const Vec&) { return tanh_all(x, eps); };
    set_constant_envelopes(s, eps, eps, eps);
    s.M_bound = std::max(1.0, eps);
    s.N_eps_bound = std::max(1.0, eps);
    s.M2_bound = kTinyM2;
    s.autonomous = true;
    const double rate = -std::log(a);
    m.kernel.projection = Projection::identity(1);
    m.kernel.envelope = DecayEnvelope::exponential(ExpRate{1.0, rate}, std::nullopt);
    m.kernel.dichotomy = uniform_dichotomy(1.0, rate, 1.0, rate);
    m.kernel.growth = growth_of(*m.kernel.dichotomy);
    m.notes = "x_{n+1} = a x_n + eps tanh(x_n), y_{n+1} = y_n";
    return m;
}

Model d_zero_f(const Params& p) {
    const int dim = static_cast<int>(p.at("dim"));
    Model m;
    auto& s = m.sys;
    s.name = "d_zero_f";
    s.time = TimeKind::discrete;
    s.dim_x = dim;
    s.dim_y = 0;
    s.linear_part = [dim](double) { return Mat(0.5 * Mat::Identity(dim, dim)); };
    s.linear_inverse = [dim](double) { return Mat(2.0 * Mat::Identity(dim, dim)); };
    s.nonlinearity = [dim](double, const Vec&, const Vec&) { return Vec(Vec::Zero(dim)); };
    set_constant_envelopes(s, 0.0, 0.0, 0.0);
    s.M2_bound = kTinyM2;
    s.autonomous = true;
    m.kernel.projection = Projection::identity(dim);
    m.kernel.envelope = DecayEnvelope::exponential(ExpRate{1.0, std::log(2.0)}, std::nullopt);
    m.kernel.dichotomy = uniform_dichotomy(1.0, std::log(2.0), 1.0, std::log(2.0));
    m.kernel.growth = growth_of(*m.kernel.dichotomy);
    m.notes = "x_{n+1} = x_n / 2, f = 0";
    return m;
}

Model d_rotation_decay_3d(const Params& p) {
    const double c = p.at("c");
    Model m;
    auto& s = m.sys;
    s.name = "d_rotation_decay_3d";
    s.time = TimeKind::discrete;
    s.dim_x = 3;
    s.dim_y = 0;
    const double c1 = std::cos(1.0), s1 = std::sin(1.0);
    s.linear_part = [c1, s1](double n) {
        Mat a = Mat::Zero(3, 3);
        a(0, 0) = c1;
        a(0, 1) = -s1;
        a(1, 0) = s1;
        a(1, 1) = c1;
        a(2, 2) = (1.0 + n * n) / (1.0 + (n + 1.0) * (n + 1.0));
        return a;
    };
    s.linear_inverse = [c1, s1](double n) {
        Mat a = Mat::Zero(3, 3);
        a(0, 0) = c1;
        a(0, 1) = s1;
        a(1, 0) = -s1;
        a(1, 1) = c1;
        a(2, 2) = (1.0 + (n + 1.0) * (n + 1.0)) / (1.0 + n * n);
        return a;
    };
    // gamma_n = c/(1+(n+1)^2)^2 so that the shifted weight gamma_{n-1} = c/(1+n^2)^2
    const auto w = [c](double n) { return c / ((1.0 + (n + 1.0) * (n + 1.0)) * (1.0 + (n + 1.0) * (n + 1.0))); };
    s.nonlinearity = [w](double n, const Vec& x, const Vec&) { return tanh_all(x, w(n) / std::sqrt(3.0)); };
    s.mu_envelope = w;
    s.gamma_envelope = w;
    s.eps_envelope = w;
    s.mu_profile = WeightProfile::rational_decay(c);
    s.gamma_profile = WeightProfile::rational_decay(c);
    s.eps_profile = WeightProfile::rational_decay(c);
    s.M2_bound = kTinyM2;
    m.kernel.projection = Projection::constant(diag({0, 0, 1}));
    m.kernel.envelope = DecayEnvelope::polynomial();
    m.notes = "rotation by 1 rad plus x3 scaled by (1+n^2)/(1+(n+1)^2); |G(m,n)| <= 1+n^2";
    return m;
}

Model d_saddle_tanh(const Params& p) {
    const double eps = p.at("eps"), kappa = p.at("kappa"), b = p.at("b");
    Model m;
    auto& s = m.sys;
    s.name = "d_saddle_tanh";
    s.time = TimeKind::discrete;
    s.dim_x = 2;
    s.dim_y = 1;
    s.linear_part = [](double) { return diag({0.5, 2.0}); };
    s.linear_inverse = [](double) { return diag({2.0, 0.5}); };
    s.nonlinearity = [eps, kappa](double, const Vec& x, const Vec& y) {
        Vec r(2);
        for (int i = 0; i < 2; ++i) r[i] = eps * std::tanh(x[i] + kappa * y[0]);
        return r;
    };
    s.drift = [b](double, const Vec& y) { return Vec(b * y); };
    s.drift_inverse = [b](double, const Vec& y) { return Vec(y / b); };
    const double eps_env = eps * std::max(1.0, kappa * std::sqrt(2.0));
    set_constant_envelopes(s, eps * std::sqrt(2.0), eps, eps_env);
    s.M_bound = std::max(1.0, eps * std::sqrt(2.0));
    s.N_eps_bound = std::max(1.0, eps_env);
    s.M2_bound = std::max(std::abs(std::log(b)), kTinyM2);
    s.autonomous = true;
    const double l2 = std::log(2.0);
    m.kernel.projection = Projection::constant(diag({1, 0}));
    m.kernel.envelope = DecayEnvelope::exponential(ExpRate{1.0, l2}, ExpRate{1.0, l2});
    m.kernel.dichotomy = uniform_dichotomy(1.0, l2, 1.0, l2);
    m.kernel.growth = growth_of(*m.kernel.dichotomy);
    m.notes = "A_n = diag(1/2, 2), P = diag(1, 0), f_i = eps tanh(x_i + kappa y), y_{n+1} = b y_n";
    return m;
}

std::vector<CatalogEntry> make_catalog() {
    const double pi = std::numbers::pi;
    const double e2_default = 0.2 / (pi / std::tanh(pi));
    return {
        {"scalar_tanh", TimeKind::continuous, "x' = -rate x + eps tanh x, y' = 0",
         {{"eps", 0.0, 2.0, 0.1, false, "nonlinearity amplitude"}, {"rate", 0.1, 5.0, 1.0, false, "decay rate"}},
         scalar_tanh},
        {"zero_f", TimeKind::continuous, "x' = -x, no nonlinearity",
         {{"dim", 1, kMaxDim, 1, true, "state dimension"}}, zero_f},
        {"rotation_decay_3d", TimeKind::continuous, "rotation plus polynomially decaying coordinate",
         {{"c", 0.0, 0.3, 0.2 / pi, false, "weight scale in c/(1+t^2)^2"}}, rotation_decay_3d},
        {"saddle_tanh", TimeKind::continuous, "hyperbolic saddle with tanh coupling",
         {{"eps", 0.0, 1.0, 0.1, false, "nonlinearity amplitude"},
          {"kappa", 0.0, 2.0, 0.0, false, "y coupling inside tanh"},
          {"beta", 0.0, 2.0, 0.0, false, "drift y' = -beta y"}},
         saddle_tanh},
        {"periodic_tanh", TimeKind::continuous, "2 pi periodic scalar system",
         {{"eps", 0.0, 1.0, 0.1, false, "nonlinearity amplitude"},
          {"amp", 0.0, 0.9, 0.5, false, "modulation of the linear part"}},
         periodic_tanh},
        {"tanh_trichotomy", TimeKind::continuous, "trichotomy without dichotomy",
         {{"eps", 0.0, 1.0, 0.05, false, "nonlinearity amplitude"}}, tanh_trichotomy},
        {"coppel", TimeKind::continuous, "non-uniformly stable scalar system",
         {{"eps", 0.0, 1.0, 0.1, false, "nonlinearity amplitude"}, {"c", 0.0, 2.0, 0.5, false, "bump height"}},
         coppel},
        {"d_scalar_tanh", TimeKind::discrete, "x_{n+1} = a x_n + eps tanh x_n",
         {{"eps", 0.0, 1.0, 0.1, false, "nonlinearity amplitude"}, {"a", 0.1, 0.9, 0.5, false, "contraction"}},
         d_scalar_tanh},
        {"d_zero_f", TimeKind::discrete, "x_{n+1} = x_n / 2", {{"dim", 1, kMaxDim, 1, true, "state dimension"}},
         d_zero_f},
        {"d_rotation_decay_3d", TimeKind::discrete, "discrete rotation plus polynomially decaying coordinate",
         {{"c", 0.0, 0.3, e2_default, false, "weight scale"}}, d_rotation_decay_3d},
        {"d_saddle_tanh", TimeKind::discrete, "discrete saddle with tanh coupling",
         {{"eps", 0.0, 0.4, 0.05, false, "nonlinearity amplitude"},
          {"kappa", 0.0, 2.0, 0.0, false, "y coupling inside tanh"},
          {"b", 0.5, 2.0, 1.0, false, "drift y_{n+1} = b y_n"}},
         d_saddle_tanh},
    };
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = make_catalog();
    return entries;
}

}  // namespace lin

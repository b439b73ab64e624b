#include "lin/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lin/error.hpp"
#include "lin/kernels.hpp"

namespace lin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Mat green_branch(const EvolutionFamily& ef, const Projection& p, double t, double s, bool forward) {
    const int d = ef.dim();
    if (forward) {
        if (p.kind == ProjKind::zero) return Mat::Zero(d, d);
        const Mat T = ef(t, s);
        return p.kind == ProjKind::identity ? T : Mat(T * p(s));
    }
    if (p.kind == ProjKind::identity) return Mat::Zero(d, d);
    const Mat T = ef(t, s);
    if (p.kind == ProjKind::zero) return -T;
    return -T * (Mat::Identity(d, d) - p(s));
}

Mat green_branch(const Cocycle& c, const Projection& p, long m, long n, bool forward) {
    const int d = c.dim();
    const double sn = static_cast<double>(n);
    if (forward) {
        if (p.kind == ProjKind::zero) return Mat::Zero(d, d);
        const Mat A = c(m, n);
        return p.kind == ProjKind::identity ? A : Mat(A * p(sn));
    }
    if (p.kind == ProjKind::identity) return Mat::Zero(d, d);
    const Mat A = c(m, n);
    if (p.kind == ProjKind::zero) return -A;
    return -A * (Mat::Identity(d, d) - p(sn));
}

GreenKernel::GreenKernel(std::shared_ptr<const EvolutionFamily> ef, Projection p, DecayEnvelope env)
    : ef_(std::move(ef)), proj_(std::move(p)), env_(env) {}

Mat GreenKernel::operator()(double t, double s) const { return green_branch(*ef_, proj_, t, s, t >= s); }

DiscreteGreenKernel::DiscreteGreenKernel(std::shared_ptr<const Cocycle> c, Projection p, DecayEnvelope env)
    : c_(std::move(c)), proj_(std::move(p)), env_(env) {}

Mat DiscreteGreenKernel::operator()(long m, long n) const { return green_branch(*c_, proj_, m, n, m >= n); }

Mat green_eval(const GreenKernel& gk, double t, double s) { return gk(t, s); }
Mat green_eval(const DiscreteGreenKernel& gk, long m, long n) { return gk(m, n); }

GreenKernel make_trichotomy_kernel(std::shared_ptr<const EvolutionFamily> ef, const TrichotomyData& td) {
    const Projection pp = td.p_plus, pm = td.p_minus;
    const int d = ef->dim();
    Projection spliced = Projection::general(d, [pp, pm](double s) { return s >= 0.0 ? pp(s) : pm(s); });
    const DecayEnvelope env = DecayEnvelope::trichotomy({ExpRate{td.D[0], td.lambda[0]}, ExpRate{td.D[1], td.lambda[1]},
                                                         ExpRate{td.D[2], td.lambda[2]}, ExpRate{td.D[3], td.lambda[3]}});
    return GreenKernel(std::move(ef), std::move(spliced), env);
}

Mat trichotomy_green(const GreenKernel& trichotomy_kernel, double t, double s) { return trichotomy_kernel(t, s); }

KernelBundle make_kernel(const Model& m, const QuadConfig& q) {
    KernelBundle b;
    if (m.sys.discrete()) {
        b.cocycle = std::make_shared<Cocycle>(m.sys, static_cast<long>(std::floor(q.window)));
        b.gkd.emplace(b.cocycle, m.kernel.projection, m.kernel.envelope);
    } else {
        b.ef = std::make_shared<EvolutionFamily>(m.sys.linear_part, m.sys.dim_x, q.h_ode, q.window);
        b.gk.emplace(b.ef, m.kernel.projection, m.kernel.envelope);
    }
    return b;
}

const ConditionResult* HypothesisReport::find(const std::string& tag) const {
    for (const auto& c : conditions) {
        if (c.tag == tag) return &c;
    }
    return nullptr;
}

namespace {

// Largest |tau| requested before the truncation radius is known.
double max_abs_tau(const Model& m, const QuadConfig& q) {
    double far = 0.0;
    for (double t : q.taus) far = std::max(far, std::abs(t));
    if (q.taus.empty() && m.sys.period && !m.sys.discrete()) far = *m.sys.period;
    return far;
}

}  // namespace

double resolve_truncation(const Model& m, const QuadConfig& q) {
    const bool disc = m.sys.discrete();
    double cap = q.window / 2.0;
    if (!q.taus.empty()) {
        double far = 0.0;
        for (double t : q.taus) far = std::max(far, std::abs(t));
        cap = q.window - far;
    } else if (m.sys.autonomous) {
        cap = q.window;
    } else if (m.sys.period && !disc) {
        cap = q.window - *m.sys.period;
    }
    if (disc) cap = std::floor(cap);
    if (cap <= (disc ? 1.0 : 0.0)) throw ValidationError("window too small for the requested sup grid");
    if (q.L) {
        if (*q.L > cap) throw ValidationError("truncation radius exceeds the available window");
        return *q.L;
    }
    const auto& env = m.kernel.envelope;
    if (!env.certified()) return cap;
    const double target = q.tol / 3.0;
    double L = disc ? 1.0 : 0.0;
    for (const WeightProfile* w : {&m.sys.mu_profile, &m.sys.gamma_profile}) {
        if (disc) {
            L = std::max(L, static_cast<double>(auto_truncation_discrete(env, *w, target, 0, static_cast<long>(cap))));
        } else {
            L = std::max(L, auto_truncation(env, *w, target, 0.0, cap));
        }
    }
    return L;
}

std::vector<double> default_tau_grid(const Model& m, const QuadConfig& q, double L) {
    if (!q.taus.empty()) return q.taus;
    if (m.sys.autonomous) return {0.0};
    const bool disc = m.sys.discrete();
    if (m.sys.period && !disc) {
        const int n = std::max(1, q.tau_count);
        std::vector<double> t(n);
        for (int i = 0; i < n; ++i) t[i] = *m.sys.period * i / n;
        return t;
    }
    const double half = disc ? std::floor(q.window - L) : q.window - L;
    const int n = std::max(1, q.tau_count);
    std::vector<double> t;
    for (int i = 0; i < n; ++i) {
        double v = n == 1 ? 0.0 : -half + 2.0 * half * i / (n - 1);
        if (disc) v = std::round(v);
        if (t.empty() || t.back() != v) t.push_back(v);
    }
    return t;
}

KernelQuadrature::KernelQuadrature(const GreenKernel& gk, const Model& m, const QuadConfig& q) : env_(gk.envelope()) {
    const double ds = q.h_ode * q.stride;
    const double L = resolve_truncation(m, q);
    long n = 2 * std::max(1L, static_cast<long>(std::ceil(L / (2.0 * ds) - 1e-9)));
    if (n > 2 && static_cast<double>(n) * ds > gk.family().window() - max_abs_tau(m, q)) n -= 2;
    L_ = static_cast<double>(n) * ds;
    taus_ = default_tau_grid(m, q, L_);
    const auto& ef = gk.family();
    for (double tau : taus_) {
        if (std::abs(tau) + L_ > ef.window() * (1.0 + 1e-12)) {
            throw DomainError("quadrature range around tau = " + std::to_string(tau) + " leaves the window");
        }
    }
    const auto simpson = [&](long j) {
        if (j == 0 || j == n) return ds / 3.0;
        return (j % 2 ? 4.0 : 2.0) * ds / 3.0;
    };
    rows_.reserve(taus_.size());
    for (double tau : taus_) {
        Row r;
        r.tau = tau;
        for (int side = 0; side < 2; ++side) {
            const bool fwd = side == 0;
            if (fwd ? !gk.forward_live() : !gk.backward_live()) continue;
            Side& sd = fwd ? r.fwd : r.bwd;
            sd.s.resize(n + 1);
            sd.w.resize(n + 1);
            sd.norm.resize(n + 1);
            for (long j = 0; j <= n; ++j) {
                const double s = fwd ? tau - static_cast<double>(j) * ds : tau + static_cast<double>(j) * ds;
                sd.s[j] = s;
                sd.w[j] = simpson(j);
                sd.norm[j] = op_norm(green_branch(ef, gk.projection(), tau, s, fwd));
            }
        }
        rows_.push_back(std::move(r));
    }
}

KernelQuadrature::KernelQuadrature(const DiscreteGreenKernel& gk, const Model& m, const QuadConfig& q)
    : discrete_(true), env_(gk.envelope()) {
    const long L = static_cast<long>(std::llround(resolve_truncation(m, q)));
    L_ = static_cast<double>(L);
    taus_ = default_tau_grid(m, q, L_);
    const auto& c = gk.cocycle();
    for (double tau : taus_) {
        const long mt = std::lround(tau);
        if (std::abs(mt) + L > c.window()) {
            throw DomainError("summation range around m = " + std::to_string(mt) + " leaves the window");
        }
    }
    for (double tau : taus_) {
        const long mt = std::lround(tau);
        Row r;
        r.tau = static_cast<double>(mt);
        if (gk.forward_live()) {
            for (long j = 0; j < L; ++j) {
                const long k = mt - j;
                r.fwd.s.push_back(static_cast<double>(k));
                r.fwd.w.push_back(1.0);
                r.fwd.norm.push_back(op_norm(green_branch(c, gk.projection(), mt, k, true)));
            }
        }
        if (gk.backward_live()) {
            for (long j = 1; j < L; ++j) {
                const long k = mt + j;
                r.bwd.s.push_back(static_cast<double>(k));
                r.bwd.w.push_back(1.0);
                r.bwd.norm.push_back(op_norm(green_branch(c, gk.projection(), mt, k, false)));
            }
        }
        rows_.push_back(std::move(r));
    }
}

KernelQuadrature::Result KernelQuadrature::integrate(const ScalarFn& weight, const WeightProfile& profile,
                                                     const EnvelopeSpec* delta, double alpha) const {
    Result res;
    res.value = -kInf;
    TailGrowth growth;
    if (delta) {
        growth.pref_forward = std::pow(delta->P_lt, alpha);
        growth.rate_forward = alpha * delta->R_lt;
        growth.pref_backward = std::pow(delta->P_ge, alpha);
        growth.rate_backward = alpha * delta->R_ge;
        if (discrete_) {
            growth.pref_forward *= std::exp(alpha * delta->R_lt);
            growth.pref_backward *= std::exp(-alpha * delta->R_ge);
        }
    }
    const WeightProfile prof = delta ? profile.pow(alpha) : profile;
    std::vector<double> vals;
    for (const auto& r : rows_) {
        double integral = 0.0;
        for (const Side* sd : {&r.fwd, &r.bwd}) {
            if (sd->s.empty()) continue;
            vals.resize(sd->s.size());
            for (std::size_t j = 0; j < sd->s.size(); ++j) {
                const double s = sd->s[j];
                const double ws = discrete_ ? weight(s - 1.0) : weight(s);
                double v = sd->norm[j] * ws;
                if (delta && v != 0.0) {
                    const double d = discrete_ ? (*delta)(s - 1.0, r.tau) : (*delta)(s, r.tau);
                    v *= std::pow(d, alpha);
                }
                vals[j] = v;
            }
            integral += kernels::dot(sd->w, vals);
        }
        double tail = 0.0;
        try {
            tail = discrete_ ? tail_bound_discrete(env_, prof, static_cast<long>(L_), std::lround(r.tau), growth)
                             : tail_bound(env_, prof, L_, r.tau, growth);
        } catch (const DivergenceError&) {
            res.divergent = true;
            tail = kInf;
        } catch (const ValidationError&) {
            res.certified = false;
            tail = 0.0;
        }
        const double total = integral + tail;
        if (total > res.value) {
            res.value = total;
            res.integral = integral;
            res.tail = tail;
            res.argmax_tau = r.tau;
        }
    }
    if (rows_.empty()) res.value = 0.0;
    return res;
}

HypothesisReport hypothesis_N_q(const Model& m, const KernelQuadrature& kq) {
    const auto& s = m.sys;
    HypothesisReport rep;
    rep.discrete = kq.discrete();
    rep.L = kq.L();
    rep.tau_count = kq.taus().size();
    if (!kq.taus().empty()) {
        rep.tau_lo = *std::min_element(kq.taus().begin(), kq.taus().end());
        rep.tau_hi = *std::max_element(kq.taus().begin(), kq.taus().end());
    }
    rep.grid_max = true;
    const auto N = kq.integrate(s.mu_envelope, s.mu_profile);
    const auto q = kq.integrate(s.gamma_envelope, s.gamma_profile);
    const auto G = kq.integrate([](double) { return 1.0; }, WeightProfile::constant(1.0));
    const auto E = kq.integrate(s.eps_envelope, s.eps_profile);
    rep.N_value = N.value;
    rep.q_value = q.value;
    rep.tail_N = N.tail;
    rep.tail_q = q.tail;
    rep.G_integral = G.divergent ? kInf : G.value;
    rep.q_eps = E.value;
    rep.certified = N.certified && q.certified && !N.divergent && !q.divergent;
    if (!rep.certified) rep.warnings.push_back("kernel envelope cannot certify the truncated tails");

    ConditionResult bound;
    bound.tag = rep.discrete ? "boundd" : "bound";
    bound.lhs = rep.q_value;
    bound.rhs = 1.0;
    bound.margin = 1.0 - rep.q_value;
    bound.tail = q.tail;
    bound.divergent = N.divergent || q.divergent;
    bound.certified = rep.certified;
    bound.pass = std::isfinite(rep.N_value) && rep.q_value < 1.0 && !bound.divergent;
    bound.note = "lhs = sup int |G| gamma; N = " + std::to_string(rep.N_value);
    rep.conditions.push_back(bound);

    ConditionResult r;
    r.tag = rep.discrete ? "rd" : "r";
    r.lhs = rep.q_eps;
    r.rhs = 1.0;
    r.margin = 1.0 - rep.q_eps;
    r.tail = E.tail;
    r.divergent = G.divergent || E.divergent;
    r.certified = G.certified && E.certified && !r.divergent;
    r.pass = !r.divergent && std::isfinite(rep.G_integral) && rep.q_eps < 1.0;
    r.note = r.divergent ? "sup int |G| not certifiably finite with this envelope"
                         : "lhs = sup int |G| eps; sup int |G| = " + std::to_string(rep.G_integral);
    rep.conditions.push_back(r);
    return rep;
}

HypothesisReport hypothesis_N_q(const Model& m, const QuadConfig& q) {
    const auto b = make_kernel(m, q);
    if (b.gkd) return hypothesis_N_q(m, KernelQuadrature(*b.gkd, m, q));
    return hypothesis_N_q(m, KernelQuadrature(*b.gk, m, q));
}

std::string holder_tag(DeltaKind delta, TimeKind time) {
    const bool d = time == TimeKind::discrete;
    switch (delta) {
    case DeltaKind::delta1:
        return d ? "c1d" : "c1";
    case DeltaKind::delta2:
        return d ? "c2d" : "c2";
    case DeltaKind::sigma:
        return d ? "c3d" : "c3";
    case DeltaKind::delta3:
        return d ? "c4d" : "c44";
    }
    return "?";
}

ConditionResult holder_condition(const Model& m, const KernelQuadrature& kq, double C, double alpha,
                                 const EnvelopeSpec& env, bool h_table) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    if (!(C > 0.0)) throw ValidationError("C must be positive");
    const auto& s = m.sys;
    const double pref = h_table ? std::max(2.0 * s.M_bound, s.N_eps_bound) * (1.0 + C) : 2.0 * s.M_bound;
    const ScalarFn eps_a = [&s, alpha](double t) { return std::pow(s.eps(t), alpha); };
    const auto r = kq.integrate(eps_a, s.eps_profile.pow(alpha), &env, alpha);
    ConditionResult c;
    c.tag = holder_tag(env.kind, s.time);
    c.rhs = C;
    c.divergent = r.divergent;
    c.certified = r.certified && !r.divergent;
    if (r.divergent) {
        c.lhs = kInf;
        c.margin = -kInf;
        c.tail = kInf;
        c.note = "integrand not integrable: alpha times envelope growth reaches the kernel decay";
    } else {
        c.lhs = pref * r.value;
        c.tail = pref * r.tail;
        c.margin = C - c.lhs;
        c.note = "pref = " + std::to_string(pref) + ", sup at t = " + std::to_string(r.argmax_tau);
    }
    c.pass = !c.divergent && c.margin >= 0.0;
    return c;
}

ConditionResult holder_x_condition(const Model& m, const KernelQuadrature& kq, double C, double alpha,
                                   DeltaKind delta) {
    if (delta != DeltaKind::delta1 && delta != DeltaKind::delta2) {
        throw ValidationError("x-Hoelder condition takes delta1 or delta2");
    }
    const auto env = delta_bounds(delta_constants(m), delta, m.sys.time);
    return holder_condition(m, kq, C, alpha, env, delta == DeltaKind::delta1);
}

ConditionResult holder_y_condition(const Model& m, const KernelQuadrature& kq, double C, double alpha,
                                   DeltaKind delta) {
    if (delta != DeltaKind::sigma && delta != DeltaKind::delta3) {
        throw ValidationError("y-Hoelder condition takes sigma or delta3");
    }
    const auto env = delta_bounds(delta_constants(m), delta, m.sys.time);
    return holder_condition(m, kq, C, alpha, env, delta == DeltaKind::sigma);
}

namespace {

ConditionResult closed_form(const std::string& tag, double alpha, double alpha_max, double lhs, double rhs) {
    ConditionResult c;
    c.tag = tag;
    c.rhs = rhs;
    if (!(alpha > 0.0 && alpha < alpha_max)) {
        c.admissible = false;
        c.lhs = std::numeric_limits<double>::quiet_NaN();
        c.margin = std::numeric_limits<double>::quiet_NaN();
        c.note = "alpha outside (0, " + std::to_string(alpha_max) + ")";
        return c;
    }
    c.lhs = lhs;
    c.margin = rhs - lhs;
    c.pass = lhs <= rhs;
    return c;
}

}  // namespace

HypothesisReport dichotomy_corollary_check(const DichotomyData& dd, double M, double eps, double alpha, double C,
                                           std::optional<double> M2) {
    for (double v : {dd.D1, dd.D2, dd.lambda1, dd.lambda2, dd.K1, dd.K2, dd.a1, dd.a2, M, eps, C}) {
        if (!(v > 0.0)) throw ValidationError("corollary constants must be positive");
    }
    if (M2 && !(*M2 > 0.0)) throw ValidationError("M2 must be positive");
    const auto& [D1, D2, l1, l2, K1, K2, a1, a2] = dd;
    HypothesisReport rep;
    rep.grid_max = false;

    ConditionResult ep;
    ep.tag = "epcon";
    ep.lhs = (D1 / l1 + D2 / l2) * eps;
    ep.rhs = 1.0;
    ep.margin = 1.0 - ep.lhs;
    ep.pass = ep.lhs < 1.0;
    rep.conditions.push_back(ep);

    const double ea = std::pow(eps, alpha);
    const double b1 = std::min(l1 / a2, l2 / a1);
    rep.alpha_bounds["epcon1"] = b1;
    rep.conditions.push_back(closed_form(
        "epcon1", alpha, b1,
        std::max(2.0 * M, eps) * (1.0 + C) * ea *
            (D1 * std::pow(K1, alpha) / (l1 - alpha * a2) + D2 * std::pow(K2, alpha) / (l2 - alpha * a1)),
        C));

    const double b2 = std::min(l1 / (a2 + K1 * eps), l2 / (a1 + K2 * eps));
    rep.alpha_bounds["epcon4"] = b2;
    rep.conditions.push_back(closed_form("epcon4", alpha, b2,
                                         2.0 * M * ea *
                                             (D1 * std::pow(K1, alpha) / (l1 - alpha * (a2 + K1 * eps)) +
                                              D2 * std::pow(K2, alpha) / (l2 - alpha * (a1 + K2 * eps))),
                                         C));

    if (!M2) {
        for (const char* tag : {"cor2cond1", "cor2condition3"}) {
            ConditionResult c;
            c.tag = tag;
            c.rhs = C;
            c.admissible = false;
            c.lhs = c.margin = std::numeric_limits<double>::quiet_NaN();
            c.note = "M2 not given";
            rep.conditions.push_back(c);
        }
        return rep;
    }
    const double m2 = *M2;
    const double b3 = std::min(l1 / m2, l2 / m2);
    rep.alpha_bounds["cor2cond1"] = b3;
    rep.conditions.push_back(closed_form("cor2cond1", alpha, b3,
                                         2.0 * M * (1.0 + C) * ea * (D1 / (l1 - alpha * m2) + D2 / (l2 - alpha * m2)),
                                         C));
    const double M3 = std::max({m2, a1, a2});
    const double b4 = std::min(l1 / (M3 + K2 * eps), l2 / (M3 + K1 * eps));
    rep.alpha_bounds["cor2condition3"] = b4;
    rep.conditions.push_back(closed_form(
        "cor2condition3", alpha, b4,
        std::pow(2.0, 1.0 + alpha) * M * ea *
            (D1 / (l1 - alpha * (M3 + K2 * eps)) + D2 / (l2 - alpha * (M3 + K1 * eps))),
        C));
    return rep;
}

}  // namespace lin

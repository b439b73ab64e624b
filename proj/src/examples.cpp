#include "lin/examples.hpp"

#include <cmath>
#include <numbers>

#include "lin/error.hpp"

namespace lin {

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson of w(s)(1+s^2) over [-W, W] plus the tail of a
// c/(1+s^2)^2 profile beyond W.
double weighted_integral(const ScalarFn& w, const WeightProfile& prof, double W, int n = 200000) {
    const double h = 2.0 * W / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = -W + h * i;
        const double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += c * w(s) * (1.0 + s * s);
    }
    return acc * h / 3.0 + 2.0 * prof.sup() * (kPi / 2.0 - std::atan(W));
}

// sum over |n| <= W of (1+n^2) w_{n-1} plus the matching tail.
double weighted_sum(const ScalarFn& w, const WeightProfile& prof, long W) {
    double acc = 0.0;
    for (long n = -W; n <= W; ++n) acc += (1.0 + static_cast<double>(n * n)) * w(static_cast<double>(n - 1));
    // sum_{n > W} c/(1+n^2) <= c (pi/2 - atan W), both sides
    return acc + 2.0 * prof.sup() * (kPi / 2.0 - std::atan(static_cast<double>(W)));
}

void add_condition(ExampleReport& r, const HypothesisReport& h, const std::string& tag, const std::string& as,
                   bool expected) {
    const auto* c = h.find(tag);
    if (!c) throw ValidationError("condition " + tag + " missing from report");
    r.checks.push_back({as, expected, c->pass, c->lhs, c->note});
}

}  // namespace

bool ExampleReport::ok() const {
    for (const auto& c : checks) {
        if (!c.ok()) return false;
    }
    return true;
}

const ExampleCheck* ExampleReport::find(const std::string& tag) const {
    for (const auto& c : checks) {
        if (c.tag == tag) return &c;
    }
    return nullptr;
}

const std::vector<std::string>& example_names() {
    static const std::vector<std::string> names{"E1_rotation_decay", "E2_discrete_rotation_decay",
                                                "E3_saddle_dichotomy", "E4_trichotomy", "E5_coppel"};
    return names;
}

ExamplePackage load_example(const std::string& requested) {
    std::string name = requested;
    for (const auto& n : example_names()) {
        if (n.rfind(requested + "_", 0) == 0) name = n;
    }
    ExamplePackage p;
    p.name = name;
    if (name == "E1_rotation_decay") {
        p.model = build_model("rotation_decay_3d");
        p.expected = {{"adm_mu", true}, {"adm_gamma", true}, {"bound", true}};
        p.notes = "no exponential dichotomy; |G(t,s)| <= 1+s^2; mu = gamma = c/(1+s^2)^2 with int (1+s^2) gamma = c pi";
    } else if (name == "E2_discrete_rotation_decay") {
        p.model = build_model("d_rotation_decay_3d");
        p.expected = {{"kernel_bound", true}, {"adm_gamma", true}, {"boundd", true}};
        p.notes = "|G(m,n)| <= 1+n^2 sampled over |m|,|n| <= 30";
    } else if (name == "E3_saddle_dichotomy") {
        p.model = build_model("saddle_tanh");
        p.expected = {{"bound", true},
                      {"epcon[eps=0.4]", true},
                      {"epcon[eps=0.6]", false},
                      {"epcon1[eps=0.4]", false},
                      {"epcon4[eps=0.4]", false},
                      {"cor2cond1[eps=0.4]", false},
                      {"cor2condition3[eps=0.4]", false},
                      {"epcon1[eps=0.001]", true},
                      {"epcon4[eps=0.001]", true},
                      {"cor2cond1[eps=0.001]", true},
                      {"cor2condition3[eps=0.001]", true}};
        p.notes = "A = diag(-1,1), P = diag(1,0), D = K = lambda = a = 1; corollaries at alpha = 0.5, C = 1, M = 1";
    } else if (name == "E4_trichotomy") {
        p.model = build_model("tanh_trichotomy");
        p.expected = {{"bound", true}, {"splice_jump", true}};
        p.notes = "two dichotomies on the half-lines spliced at t = 0";
    } else if (name == "E5_coppel") {
        p.model = build_model("coppel");
        p.expected = {{"bound", true}, {"phi_integral", true}};
        p.notes = "T(t,s) = (phi(t)/phi(s)) e^{-(t-s)}, P = I; the limit condition on phi is documented, not enforced";
    } else {
        throw CatalogError("unknown example: " + name);
    }
    return p;
}

double e2_kernel_ratio(const Model& m, long radius) {
    auto cyc = std::make_shared<Cocycle>(m.sys, radius + 1);
    const DiscreteGreenKernel gk(cyc, m.kernel.projection, m.kernel.envelope);
    double worst = 0.0;
    for (long a = -radius; a <= radius; ++a) {
        for (long b = -radius; b <= radius; ++b) {
            worst = std::max(worst, op_norm(gk(a, b)) / (1.0 + static_cast<double>(b * b)));
        }
    }
    return worst;
}

ExampleReport run_example(const ExamplePackage& pkg, const QuadConfig& numerics) {
    ExampleReport r;
    r.name = pkg.name;
    const auto& sys = pkg.model.sys;
    r.hypothesis = hypothesis_N_q(pkg.model, numerics);
    const auto expected = [&](const std::string& tag) {
        for (const auto& e : pkg.expected) {
            if (e.tag == tag) return e.expect_pass;
        }
        throw ValidationError("no expectation recorded for " + tag);
    };

    if (pkg.name == "E1_rotation_decay") {
        const double mu = weighted_integral(sys.mu_envelope, sys.mu_profile, 200.0);
        const double ga = weighted_integral(sys.gamma_envelope, sys.gamma_profile, 200.0);
        r.checks.push_back({"adm_mu", expected("adm_mu"), std::isfinite(mu), mu, "int (1+s^2) mu"});
        r.checks.push_back({"adm_gamma", expected("adm_gamma"), ga < 1.0, ga, "int (1+s^2) gamma"});
        add_condition(r, r.hypothesis, "bound", "bound", expected("bound"));
    } else if (pkg.name == "E2_discrete_rotation_decay") {
        const double k = e2_kernel_ratio(pkg.model, 30);
        r.checks.push_back({"kernel_bound", expected("kernel_bound"), k <= 1.0 + 1e-12, k,
                            "max |G(m,n)| / (1+n^2), |m|,|n| <= 30"});
        const double ga = weighted_sum(sys.gamma_envelope, sys.gamma_profile, 2000);
        r.checks.push_back({"adm_gamma", expected("adm_gamma"), ga < 1.0, ga, "sum (1+n^2) gamma_{n-1}"});
        add_condition(r, r.hypothesis, "boundd", "boundd", expected("boundd"));
    } else if (pkg.name == "E3_saddle_dichotomy") {
        add_condition(r, r.hypothesis, "bound", "bound", expected("bound"));
        const auto& dd = *pkg.model.kernel.dichotomy;
        for (double eps : {0.4, 0.6, 0.001}) {
            const auto rep = dichotomy_corollary_check(dd, 1.0, eps, 0.5, 1.0, sys.M2_bound);
            char buf[32];
            std::snprintf(buf, sizeof buf, "[eps=%g]", eps);
            for (const auto& c : rep.conditions) {
                const std::string tag = c.tag + buf;
                for (const auto& e : pkg.expected) {
                    if (e.tag == tag) r.checks.push_back({tag, e.expect_pass, c.pass, c.lhs, c.note});
                }
            }
        }
    } else if (pkg.name == "E4_trichotomy") {
        add_condition(r, r.hypothesis, "bound", "bound", expected("bound"));
        const auto& td = *pkg.model.kernel.trichotomy;
        auto ef = std::make_shared<EvolutionFamily>(sys.linear_part, sys.dim_x, numerics.h_ode, 2.0);
        const GreenKernel gk = make_trichotomy_kernel(ef, td);
        const double t = 0.5, d = 1e-6;
        const Mat jump = trichotomy_green(gk, t, d) - trichotomy_green(gk, t, -d);
        const Mat want = (*ef)(t, 0.0) * (td.p_plus(0.0) - td.p_minus(0.0));
        const double err = op_norm(jump - want);
        r.checks.push_back({"splice_jump", expected("splice_jump"), err <= 1e-5, err,
                            "|G(t,0+) - G(t,0-) - T(t,0)(P+(0) - P-(0))| at t = 0.5"});
    } else if (pkg.name == "E5_coppel") {
        add_condition(r, r.hypothesis, "bound", "bound", expected("bound"));
        // phi from phi'/phi = A + 1 (RK4), then int (1/phi - 1) by the trapezoid rule against 2c.
        const double c = pkg.model.params.at("c");
        const int n = 120000;
        const double W = 60.0, h = W / n;
        const auto rate = [&](double t) { return sys.A(t)(0, 0) + 1.0; };
        double logphi = 0.0, acc = 0.0, prev = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double t = h * (i - 1);
            logphi += h / 6.0 * (rate(t) + 4.0 * rate(t + 0.5 * h) + rate(t + h));
            const double cur = std::exp(-logphi) - 1.0;
            acc += 0.5 * h * (prev + cur);
            prev = cur;
        }
        r.checks.push_back({"phi_integral", expected("phi_integral"), std::abs(acc - 2.0 * c) <= 1e-6, acc,
                            "int_0^inf (1/phi - 1) dt against 2c"});
    }
    return r;
}

}  // namespace lin

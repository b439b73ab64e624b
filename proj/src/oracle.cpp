#include <algorithm>
#include <cmath>
#include <limits>

#include "lin/conjugacy.hpp"
#include "lin/error.hpp"

namespace lin {

OracleResult brute_force_h_discrete(const Model& m, long n, const Vec& xi, const Vec& eta, int K, long L,
                                    double q_value, double N_value) {
    const auto& sys = m.sys;
    if (!sys.discrete()) throw ValidationError("oracle needs a discrete system");
    if (!(q_value < 1.0)) throw HypothesisError("contraction hypothesis fails: q = " + std::to_string(q_value));
    if (K < 1 || L < 1) throw ValidationError("oracle needs K >= 1 and L >= 1");
    const int d = sys.dim_x;

    // Keep the linear orbit representable: limit the depth so that the orbit
    // grows by at most 2^900 across the window.
    double lg = 0.0;
    for (long k = n - L; k <= n + L; ++k) {
        lg = std::max({lg, std::log2(std::max(1.0, op_norm(sys.A(static_cast<double>(k))))),
                       std::log2(std::max(1.0, op_norm(sys.A_inv(static_cast<double>(k)))))});
    }
    if (lg > 0.0) K = std::max(1, std::min(K, static_cast<int>(900.0 / (lg * static_cast<double>(L)))));

    const long span = static_cast<long>(K) * L;
    const long lo = n - span - 1, hi = n + span + 1;
    const Cocycle cyc(sys, std::max(std::abs(lo), std::abs(hi)) + 1);

    // Exact linear and drift orbits through (xi, eta) at n.
    const std::size_t W = static_cast<std::size_t>(hi - lo + 1);
    std::vector<Vec> o(W), y(W);
    o[n - lo] = xi;
    y[n - lo] = eta;
    for (long k = n; k < hi; ++k) {
        o[k + 1 - lo] = cyc.A(k) * o[k - lo];
        y[k + 1 - lo] = sys.dim_y > 0 ? sys.g(static_cast<double>(k), y[k - lo]) : y[k - lo];
    }
    for (long k = n - 1; k >= lo; --k) {
        o[k - lo] = cyc.A_inv(k) * o[k + 1 - lo];
        y[k - lo] = sys.dim_y > 0 ? sys.g_inv(static_cast<double>(k), y[k + 1 - lo]) : y[k + 1 - lo];
    }

    // Kernel rows G(r, r + j) for |j| < L over the widest level, built
    // incrementally along the cocycle.
    const long rlo = n - span + L, rhi = n + span - L;
    const auto& proj = m.kernel.projection;
    const std::size_t rowlen = static_cast<std::size_t>(2 * L - 1);
    std::vector<Mat> G(static_cast<std::size_t>(rhi - rlo + 1) * rowlen);
    for (long r = rlo; r <= rhi; ++r) {
        Mat* row = &G[static_cast<std::size_t>(r - rlo) * rowlen];
        Mat A = Mat::Identity(d, d);  // A(r, k)
        for (long k = r; k > r - L; --k) {
            if (k < r) A = A * cyc.A(k);
            const Mat P = proj(static_cast<double>(k));
            row[k - r + L - 1] = proj.kind == ProjKind::zero ? Mat(Mat::Zero(d, d)) : Mat(A * P);
        }
        A = Mat::Identity(d, d);
        for (long k = r + 1; k < r + L; ++k) {
            A = A * cyc.A_inv(k - 1);
            const Mat P = proj(static_cast<double>(k));
            row[k - r + L - 1] = proj.kind == ProjKind::identity ? Mat(Mat::Zero(d, d))
                                                                 : Mat(-A * (Mat::Identity(d, d) - P));
        }
    }

    // Level j holds u on [n - (K - j) L, n + (K - j) L]; level 0 is zero.
    std::vector<Vec> u(W, Vec::Zero(d)), next(W, Vec::Zero(d));
    for (int j = 1; j <= K; ++j) {
        const long a = n - static_cast<long>(K - j) * L, b = n + static_cast<long>(K - j) * L;
        for (long r = a; r <= b; ++r) {
            const Mat* row = &G[static_cast<std::size_t>(r - rlo) * rowlen];
            Vec acc = Vec::Zero(d);
            for (long k = r - L + 1; k < r + L; ++k) {
                const long s = k - 1;
                const Vec arg = o[s - lo] + u[s - lo];
                acc += row[k - r + L - 1] * sys.f(static_cast<double>(s), arg, y[s - lo]);
            }
            next[r - lo] = acc;
        }
        for (long r = a; r <= b; ++r) u[r - lo] = next[r - lo];
    }

    double tail = 0.0;
    const auto& env = m.kernel.envelope;
    if (env.certified()) {
        for (long r = rlo; r <= rhi; ++r) tail = std::max(tail, tail_bound_discrete(env, sys.mu_profile, L, r));
    } else {
        tail = std::numeric_limits<double>::infinity();
    }
    OracleResult res;
    res.value = u[n - lo];
    res.K = K;
    res.L = L;
    res.radius = std::pow(q_value, K) * N_value + tail / (1.0 - q_value);
    return res;
}

double periodicity_defect(const FunctionTable& h, double T0, double settle) {
    if (!(T0 > 0.0)) throw ValidationError("period must be positive");
    const Axis& ta = h.tau_axis();
    if (ta.n == 1) return 0.0;
    const double hi = ta.node(ta.n - 1);
    double worst = 0.0;
    bool any = false;
    double t;
    Vec x, y;
    for (std::size_t i = 0; i < h.node_count(); ++i) {
        h.node(i, t, x, y);
        if (t < settle - 1e-12 || t + T0 > hi + 1e-9) continue;
        any = true;
        const Vec a = h.value(i);
        const Vec b = h.eval(t + T0, x, y);
        worst = std::max(worst, (a - b).norm());
    }
    if (!any) throw ValidationError("tau extent of the table is shorter than the period");
    return worst;
}

}  // namespace lin

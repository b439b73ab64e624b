#include "lin/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lin/error.hpp"

namespace lin {

namespace {

constexpr double kGridSnap = 1e-9;
constexpr double kWindowSlack = 1e-9;

Mat rk4_forward(const MatFn& a, double t, double h, const Mat& m) {
    const Mat k1 = a(t) * m;
    const Mat a_mid = a(t + 0.5 * h);
    const Mat k2 = a_mid * (m + 0.5 * h * k1);
    const Mat k3 = a_mid * (m + 0.5 * h * k2);
    const Mat k4 = a(t + h) * (m + h * k3);
    return m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Psi' = -Psi A
Mat rk4_adjoint(const MatFn& a, double t, double h, const Mat& m) {
    const Mat k1 = -m * a(t);
    const Mat a_mid = a(t + 0.5 * h);
    const Mat k2 = -(m + 0.5 * h * k1) * a_mid;
    const Mat k3 = -(m + 0.5 * h * k2) * a_mid;
    const Mat k4 = -(m + h * k3) * a(t + h);
    return m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

EvolutionFamily::EvolutionFamily(MatFn a, int dim, double h_ode, double t_max)
    : a_(std::move(a)), dim_(dim), h_(h_ode), t_max_(t_max) {
    if (!(h_ode > 0.0) || !(t_max > 0.0)) throw ValidationError("h_ode and window must be positive");
    n_ = static_cast<long>(std::ceil(t_max / h_ode - kGridSnap));
    phi_.resize(2 * n_ + 1);
    psi_.resize(2 * n_ + 1);
    phi_[n_] = Mat::Identity(dim, dim);
    psi_[n_] = Mat::Identity(dim, dim);
    for (long k = 0; k < n_; ++k) {
        const double t = static_cast<double>(k) * h_;
        phi_[n_ + k + 1] = rk4_forward(a_, t, h_, phi_[n_ + k]);
        psi_[n_ + k + 1] = rk4_adjoint(a_, t, h_, psi_[n_ + k]);
        const double tb = -static_cast<double>(k) * h_;
        phi_[n_ - k - 1] = rk4_forward(a_, tb, -h_, phi_[n_ - k]);
        psi_[n_ - k - 1] = rk4_adjoint(a_, tb, -h_, psi_[n_ - k]);
    }
}

void EvolutionFamily::check(double t) const {
    if (!(std::abs(t) <= t_max_ * (1.0 + kWindowSlack) + kWindowSlack)) {
        throw DomainError("time " + std::to_string(t) + " outside window [-" + std::to_string(t_max_) + ", " +
                          std::to_string(t_max_) + "]");
    }
}

bool EvolutionFamily::on_grid(double t, long& k) const {
    k = std::lround(t / h_);
    return std::abs(t - static_cast<double>(k) * h_) <= kGridSnap * h_;
}

Mat EvolutionFamily::phi(double t) const {
    check(t);
    long k;
    if (on_grid(t, k)) return phi_[std::clamp(k, -n_, n_) + n_];
    k = std::clamp(static_cast<long>(std::floor(t / h_)), -n_, n_);
    const double t0 = static_cast<double>(k) * h_;
    return rk4_forward(a_, t0, t - t0, phi_[k + n_]);
}

Mat EvolutionFamily::psi(double t) const {
    check(t);
    long k;
    if (on_grid(t, k)) return psi_[std::clamp(k, -n_, n_) + n_];
    k = std::clamp(static_cast<long>(std::floor(t / h_)), -n_, n_);
    const double t0 = static_cast<double>(k) * h_;
    return rk4_adjoint(a_, t0, t - t0, psi_[k + n_]);
}

Mat EvolutionFamily::operator()(double t, double s) const {
    if (t == s) {
        check(t);
        return Mat::Identity(dim_, dim_);
    }
    return phi(t) * psi(s);
}

Mat evolve_linear(const EvolutionFamily& ef, double t, double s) { return ef(t, s); }

void rk4_step(const CoupledSystem& sys, double t, double h, Vec& x, Vec& y, bool coupled) {
    const bool has_y = sys.dim_y > 0;
    const auto fx = [&](double tt, const Vec& xx, const Vec& yy) -> Vec {
        Vec r = sys.A(tt) * xx;
        if (coupled) r += sys.f(tt, xx, yy);
        return r;
    };
    const auto fy = [&](double tt, const Vec& yy) -> Vec { return has_y ? sys.g(tt, yy) : yy; };
    const double th = t + 0.5 * h;
    const Vec kx1 = fx(t, x, y);
    const Vec ky1 = fy(t, y);
    const Vec y2 = y + 0.5 * h * ky1;
    const Vec kx2 = fx(th, x + 0.5 * h * kx1, y2);
    const Vec ky2 = fy(th, y2);
    const Vec y3 = y + 0.5 * h * ky2;
    const Vec kx3 = fx(th, x + 0.5 * h * kx2, y3);
    const Vec ky3 = fy(th, y3);
    const Vec y4 = y + h * ky3;
    const Vec kx4 = fx(t + h, x + h * kx3, y4);
    const Vec ky4 = fy(t + h, y4);
    x += (h / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
    if (has_y) y += (h / 6.0) * (ky1 + 2.0 * ky2 + 2.0 * ky3 + ky4);
}

namespace {

void check_window(const OdeConfig& cfg, double t) {
    if (!(std::abs(t) <= cfg.window * (1.0 + kWindowSlack) + kWindowSlack)) {
        throw DomainError("time " + std::to_string(t) + " outside window");
    }
}

void integrate(const CoupledSystem& sys, const OdeConfig& cfg, double tau, double t, Vec& x, Vec& y, bool coupled) {
    check_window(cfg, tau);
    check_window(cfg, t);
    if (t == tau) return;
    const long n = std::max(1L, static_cast<long>(std::ceil(std::abs(t - tau) / cfg.h_ode - kGridSnap)));
    const double h = (t - tau) / static_cast<double>(n);
    for (long i = 0; i < n; ++i) rk4_step(sys, tau + static_cast<double>(i) * h, h, x, y, coupled);
}

// y-only RK4 (x untouched)
void integrate_drift(const CoupledSystem& sys, const OdeConfig& cfg, double tau, double t, Vec& y) {
    check_window(cfg, tau);
    check_window(cfg, t);
    if (t == tau || sys.dim_y == 0 || !sys.drift) return;
    const long n = std::max(1L, static_cast<long>(std::ceil(std::abs(t - tau) / cfg.h_ode - kGridSnap)));
    const double h = (t - tau) / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
        const double s = tau + static_cast<double>(i) * h;
        const Vec k1 = sys.g(s, y);
        const Vec k2 = sys.g(s + 0.5 * h, y + 0.5 * h * k1);
        const Vec k3 = sys.g(s + 0.5 * h, y + 0.5 * h * k2);
        const Vec k4 = sys.g(s + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

}  // namespace

Vec solve_drift(const CoupledSystem& sys, const OdeConfig& cfg, double tau, const Vec& eta, double t) {
    Vec y = eta;
    integrate_drift(sys, cfg, tau, t, y);
    return y;
}

FlowState solve_uncoupled(const CoupledSystem& sys, const EvolutionFamily& ef, double tau, const Vec& xi,
                          const Vec& eta, double t) {
    FlowState out;
    out.x = t == tau ? xi : Vec(ef(t, tau) * xi);
    out.y = solve_drift(sys, OdeConfig{ef.step(), ef.window()}, tau, eta, t);
    return out;
}

FlowState solve_coupled(const CoupledSystem& sys, const OdeConfig& cfg, double tau, const Vec& xi, const Vec& eta,
                        double t) {
    FlowState out{xi, eta};
    integrate(sys, cfg, tau, t, out.x, out.y, true);
    return out;
}

void record_trajectory(const CoupledSystem& sys, const OdeConfig& cfg, double tau, const Vec& xi, const Vec& eta,
                       int dir, int stride, std::size_t count, bool coupled, std::vector<FlowState>& out) {
    out.resize(count);
    if (count == 0) return;
    const double h = dir >= 0 ? cfg.h_ode : -cfg.h_ode;
    check_window(cfg, tau);
    check_window(cfg, tau + h * static_cast<double>(stride) * static_cast<double>(count - 1));
    Vec x = xi, y = eta;
    out[0] = {x, y};
    long step = 0;
    for (std::size_t j = 1; j < count; ++j) {
        for (int i = 0; i < stride; ++i, ++step) {
            const double t = tau + static_cast<double>(step) * h;
            if (coupled) {
                rk4_step(sys, t, h, x, y, true);
            } else if (sys.dim_y > 0 && sys.drift) {
                const Vec k1 = sys.g(t, y);
                const Vec k2 = sys.g(t + 0.5 * h, y + 0.5 * h * k1);
                const Vec k3 = sys.g(t + 0.5 * h, y + 0.5 * h * k2);
                const Vec k4 = sys.g(t + h, y + h * k3);
                y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        out[j] = {x, y};
    }
}

Cocycle::Cocycle(const CoupledSystem& sys, long window) : window_(window), dim_(sys.dim_x) {
    if (window < 1) throw ValidationError("cocycle window must be positive");
    a_.resize(2 * window + 1);
    a_inv_.resize(2 * window + 1);
    for (long n = -window; n <= window; ++n) {
        const double t = static_cast<double>(n);
        a_[n + window] = sys.A(t);
        a_inv_[n + window] = sys.A_inv(t);
    }
}

void Cocycle::check(long n) const {
    if (n < -window_ || n > window_) throw DomainError("index " + std::to_string(n) + " outside cocycle window");
}

const Mat& Cocycle::A(long n) const {
    check(n);
    return a_[n + window_];
}

const Mat& Cocycle::A_inv(long n) const {
    check(n);
    return a_inv_[n + window_];
}

Mat Cocycle::operator()(long m, long n) const {
    check(m);
    check(n);
    Mat r = Mat::Identity(dim_, dim_);
    if (m > n) {
        for (long k = n; k < m; ++k) r = A(k) * r;
    } else if (m < n) {
        for (long k = n - 1; k >= m; --k) r = A_inv(k) * r;
    }
    return r;
}

Mat cocycle_eval(const Cocycle& c, long m, long n) { return c(m, n); }

Vec backward_step(const CoupledSystem& sys, long k, const Vec& x_next, const Vec& y_k, const Mat& a_inv) {
    const double t = static_cast<double>(k);
    Vec x = a_inv * x_next;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 500; ++it) {
        const Vec nx = a_inv * (x_next - sys.f(t, x, y_k));
        const double d = norm(nx - x);
        x = nx;
        if (d <= 1e-15 * (1.0 + norm(x))) return x;
        if (it > 5 && d > 0.999 * prev) {
            throw ConvergenceError("backward step at n = " + std::to_string(k) + " does not contract");
        }
        prev = d;
    }
    throw ConvergenceError("backward step at n = " + std::to_string(k) + " did not converge");
}

FlowState solve_linear(const CoupledSystem& sys, const OdeConfig& cfg, double tau, const Vec& xi, const Vec& eta,
                       double t) {
    FlowState out{xi, eta};
    integrate(sys, cfg, tau, t, out.x, out.y, false);
    return out;
}

FlowState orbit(const CoupledSystem& sys, long n, const FlowState& state, long m, bool coupled) {
    FlowState s = state;
    for (long k = n; k < m; ++k) {
        const double t = static_cast<double>(k);
        Vec nx = sys.A(t) * s.x;
        if (coupled) nx += sys.f(t, s.x, s.y);
        s.y = sys.dim_y > 0 ? sys.g(t, s.y) : s.y;
        s.x = nx;
    }
    for (long k = n - 1; k >= m; --k) {
        const double t = static_cast<double>(k);
        s.y = sys.dim_y > 0 ? sys.g_inv(t, s.y) : s.y;
        const Mat ai = sys.A_inv(t);
        s.x = coupled ? backward_step(sys, k, s.x, s.y, ai) : Vec(ai * s.x);
    }
    return s;
}

}  // namespace lin

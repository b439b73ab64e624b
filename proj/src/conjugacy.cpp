#include "lin/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "conjugacy_engine.hpp"
#include "lin/error.hpp"
#include "lin/kernels.hpp"

namespace lin {

namespace detail {

Engine::Engine(const Model& m, const SolveConfig& cfg, double tau_lo, double tau_hi)
    : m_(m), cfg_(cfg), discrete_(m.sys.discrete()), d_(m.sys.dim_x) {
    const auto& q = cfg.quad;
    QuadConfig qq = q;
    qq.taus = tau_lo == tau_hi ? std::vector<double>{tau_lo} : std::vector<double>{tau_lo, tau_hi};
    const double L = resolve_truncation(m, qq);
    const double far = std::max(std::abs(tau_lo), std::abs(tau_hi));
    const auto& env = m.kernel.envelope;
    const auto& prof = m.sys.mu_profile;
    ode_ = {q.h_ode, q.window};
    std::vector<double> probes{tau_lo, tau_hi};
    for (int i = 1; i < 64; ++i) probes.push_back(tau_lo + (tau_hi - tau_lo) * i / 64.0);
    if (tau_lo < 0.0 && tau_hi > 0.0) probes.push_back(0.0);
    if (discrete_) {
        n_ = std::max(1L, std::lround(L));
        L_ = static_cast<double>(n_);
        cocycle_ = std::make_shared<Cocycle>(m.sys, static_cast<long>(std::floor(q.window)));
        if (env.certified()) {
            for (long k = std::lround(tau_lo); k <= std::lround(tau_hi); ++k) {
                tail_ = std::max(tail_, tail_bound_discrete(env, prof, n_, k));
            }
        }
    } else {
        const double ds = q.h_ode * q.stride;
        n_ = 2 * std::max(1L, static_cast<long>(std::ceil(L / (2.0 * ds) - 1e-9)));
        while (n_ > 2 && far + static_cast<double>(n_) * ds > q.window * (1.0 + 1e-12)) n_ -= 2;
        L_ = static_cast<double>(n_) * ds;
        ef_ = std::make_shared<EvolutionFamily>(m.sys.linear_part, d_, q.h_ode, q.window);
        if (env.certified()) {
            for (double t : probes) tail_ = std::max(tail_, tail_bound(env, prof, L_, t));
        }
    }
    if (!env.certified()) tail_ = std::numeric_limits<double>::infinity();
}

TauCache Engine::cache(double tau) const {
    TauCache c;
    c.tau = tau;
    const auto& proj = m_.kernel.projection;
    const bool fwd_live = proj.kind != ProjKind::zero;
    const bool bwd_live = proj.kind != ProjKind::identity;
    const auto push = [&](Side& sd, double s, const Mat& G, double w, const Mat& T) {
        sd.s.push_back(s);
        sd.T.push_back(T);
        for (int r = 0; r < d_; ++r) {
            for (int cc = 0; cc < d_; ++cc) sd.G.push_back(w * G(r, cc));
        }
    };
    if (discrete_) {
        const long mt = std::lround(tau);
        if (fwd_live) {
            for (long j = 0; j < n_; ++j) {
                const long k = mt - j;
                push(c.fwd, static_cast<double>(k - 1), green_branch(*cocycle_, proj, mt, k, true), 1.0,
                     (*cocycle_)(k - 1, mt));
            }
        }
        if (bwd_live) {
            for (long j = 1; j < n_; ++j) {
                const long k = mt + j;
                push(c.bwd, static_cast<double>(k - 1), green_branch(*cocycle_, proj, mt, k, false), 1.0,
                     (*cocycle_)(k - 1, mt));
            }
        }
    } else {
        const double ds = cfg_.quad.h_ode * cfg_.quad.stride;
        for (int side = 0; side < 2; ++side) {
            const bool fwd = side == 0;
            if (fwd ? !fwd_live : !bwd_live) continue;
            Side& sd = fwd ? c.fwd : c.bwd;
            for (long j = 0; j <= n_; ++j) {
                const double s = fwd ? tau - static_cast<double>(j) * ds : tau + static_cast<double>(j) * ds;
                const double w = (j == 0 || j == n_ ? 1.0 : (j % 2 ? 4.0 : 2.0)) * ds / 3.0;
                push(sd, s, green_branch(*ef_, proj, tau, s, fwd), w, (*ef_)(s, tau));
            }
        }
    }
    // Reorder kernel entries component-major so each (r,c) series is contiguous.
    for (Side* sd : {&c.fwd, &c.bwd}) {
        const std::size_t n = sd->s.size();
        std::vector<double> g(sd->G.size());
        for (std::size_t j = 0; j < n; ++j) {
            for (int rc = 0; rc < d_ * d_; ++rc) g[rc * n + j] = sd->G[j * d_ * d_ + rc];
        }
        sd->G.swap(g);
    }
    return c;
}

void Engine::paths(const TauCache& c, const Vec& xi, const Vec& eta, bool coupled, Paths& p) const {
    const auto& sys = m_.sys;
    const std::size_t nf = c.fwd.s.size(), nb = c.bwd.s.size();
    p.fwd_y.assign(nf, eta);
    p.bwd_y.assign(nb, eta);
    p.fwd_x.clear();
    p.bwd_x.clear();
    if (discrete_) {
        const long mt = std::lround(c.tau);
        if (nf > 0) {
            Vec x = xi, y = eta;
            if (coupled) p.fwd_x.resize(nf);
            for (std::size_t j = 0; j < nf; ++j) {
                const long s = mt - 1 - static_cast<long>(j);
                if (sys.dim_y > 0) y = sys.g_inv(static_cast<double>(s), y);
                if (coupled) {
                    x = backward_step(sys, s, x, y, cocycle_->A_inv(s));
                    p.fwd_x[j] = x;
                }
                p.fwd_y[j] = y;
            }
        }
        if (nb > 0) {
            Vec x = xi, y = eta;
            if (coupled) p.bwd_x.resize(nb);
            for (std::size_t j = 0; j < nb; ++j) {
                const long s = mt + static_cast<long>(j);
                p.bwd_y[j] = y;
                if (coupled) p.bwd_x[j] = x;
                if (j + 1 == nb) break;
                const double sd = static_cast<double>(s);
                if (coupled) x = cocycle_->A(s) * x + sys.f(sd, x, y);
                if (sys.dim_y > 0) y = sys.g(sd, y);
            }
        }
        return;
    }
    const bool moves_y = sys.dim_y > 0 && static_cast<bool>(sys.drift);
    if (!coupled && !moves_y) return;
    std::vector<FlowState> st;
    for (int side = 0; side < 2; ++side) {
        const std::size_t n = side == 0 ? nf : nb;
        if (n == 0) continue;
        record_trajectory(sys, ode_, c.tau, xi, eta, side == 0 ? -1 : 1, cfg_.quad.stride, n, coupled, st);
        auto& ys = side == 0 ? p.fwd_y : p.bwd_y;
        auto& xs = side == 0 ? p.fwd_x : p.bwd_x;
        if (coupled) xs.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            ys[j] = st[j].y;
            if (coupled) xs[j] = st[j].x;
        }
    }
}

void Engine::accumulate(const Side& sd, const std::vector<double>& F, double* out) const {
    const std::size_t n = sd.s.size();
    for (int r = 0; r < d_; ++r) {
        for (int c = 0; c < d_; ++c) {
            out[r] += kernels::dot({sd.G.data() + (r * d_ + c) * n, n}, {F.data() + c * n, n});
        }
    }
}

void Engine::apply_h(const TauCache& c, const Vec& xi, const Paths& p, const FunctionTable& h, double* out) const {
    for (int r = 0; r < d_; ++r) out[r] = 0.0;
    double hv[kMaxDim];
    for (int side = 0; side < 2; ++side) {
        const Side& sd = side == 0 ? c.fwd : c.bwd;
        const auto& ys = side == 0 ? p.fwd_y : p.bwd_y;
        const std::size_t n = sd.s.size();
        if (n == 0) continue;
        F_.resize(d_ * n);
        for (std::size_t j = 0; j < n; ++j) {
            Vec x = sd.T[j] * xi;
            h.eval_into(sd.s[j], x.data(), ys[j].data(), hv);
            for (int i = 0; i < d_; ++i) x[i] += hv[i];
            const Vec fv = m_.sys.f(sd.s[j], x, ys[j]);
            for (int i = 0; i < d_; ++i) F_[i * n + j] = fv[i];
        }
        accumulate(sd, F_, out);
    }
}

void Engine::apply_hbar(const TauCache& c, const Paths& p, double* out) const {
    for (int r = 0; r < d_; ++r) out[r] = 0.0;
    for (int side = 0; side < 2; ++side) {
        const Side& sd = side == 0 ? c.fwd : c.bwd;
        const auto& ys = side == 0 ? p.fwd_y : p.bwd_y;
        const auto& xs = side == 0 ? p.fwd_x : p.bwd_x;
        const std::size_t n = sd.s.size();
        if (n == 0) continue;
        F_.resize(d_ * n);
        for (std::size_t j = 0; j < n; ++j) {
            const Vec fv = m_.sys.f(sd.s[j], xs[j], ys[j]);
            for (int i = 0; i < d_; ++i) F_[i * n + j] = fv[i];
        }
        accumulate(sd, F_, out);
    }
    for (int r = 0; r < d_; ++r) out[r] = -out[r];
}

bool Engine::outside(const TauCache& c, double lo, double hi) {
    for (const Side* sd : {&c.fwd, &c.bwd}) {
        for (double s : sd->s) {
            if (s < lo - 1e-9 || s > hi + 1e-9) return true;
        }
    }
    return false;
}

}  // namespace detail

namespace {

using detail::Engine;
using detail::Paths;
using detail::TauCache;

std::vector<Vec> axis_points(const std::vector<Axis>& axes) {
    std::size_t total = 1;
    for (const auto& a : axes) total *= static_cast<std::size_t>(a.n);
    std::vector<Vec> pts(total, Vec(static_cast<int>(axes.size())));
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t r = i;
        for (int k = static_cast<int>(axes.size()) - 1; k >= 0; --k) {
            pts[i][k] = axes[k].node(static_cast<int>(r % axes[k].n));
            r /= axes[k].n;
        }
    }
    return pts;
}

void check_grid(const Model& m, const GridSpec& g) {
    if (static_cast<int>(g.x.size()) != m.sys.dim_x || static_cast<int>(g.y.size()) != m.sys.dim_y) {
        throw ValidationError("grid dimensions do not match the system");
    }
    if (g.tau.n < 1) throw ValidationError("tau axis needs at least one node");
    if (m.sys.discrete()) {
        for (int i = 0; i < g.tau.n; ++i) {
            const double t = g.tau.node(i);
            if (std::abs(t - std::round(t)) > 1e-9) throw ValidationError("discrete tables need integer tau nodes");
        }
    }
}

double tau_hi(const Axis& a) { return a.node(a.n - 1); }

struct Sample {
    double t;
    Vec x, y;
};

// Cell centres of the table (tau stays on nodes for discrete or constant axes),
// all of them when there are at most `budget`, else a seeded random subset.
std::vector<Sample> cell_centres(const GridSpec& g, bool discrete, std::size_t budget, std::uint64_t seed) {
    std::vector<std::vector<double>> choice;
    const auto centres = [](const Axis& a, bool nodes) {
        std::vector<double> v;
        if (a.n == 1 || nodes) {
            for (int i = 0; i < a.n; ++i) v.push_back(a.node(i));
        } else {
            for (int i = 0; i + 1 < a.n; ++i) v.push_back(0.5 * (a.node(i) + a.node(i + 1)));
        }
        return v;
    };
    choice.push_back(centres(g.tau, discrete));
    for (const auto& a : g.x) choice.push_back(centres(a, false));
    for (const auto& a : g.y) choice.push_back(centres(a, false));
    std::size_t total = 1;
    for (const auto& c : choice) total *= c.size();
    std::vector<std::size_t> ids;
    if (total <= budget) {
        ids.resize(total);
        for (std::size_t i = 0; i < total; ++i) ids[i] = i;
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, total - 1);
        for (std::size_t i = 0; i < budget; ++i) ids.push_back(pick(rng));
        std::sort(ids.begin(), ids.end());
    }
    const int dx = static_cast<int>(g.x.size()), dy = static_cast<int>(g.y.size());
    std::vector<Sample> out;
    out.reserve(ids.size());
    for (std::size_t id : ids) {
        Sample s{0.0, Vec(dx), Vec(dy)};
        std::size_t r = id;
        for (int k = static_cast<int>(choice.size()) - 1; k >= 0; --k) {
            const double v = choice[k][r % choice[k].size()];
            r /= choice[k].size();
            if (k == 0) {
                s.t = v;
            } else if (k <= dx) {
                s.x[k - 1] = v;
            } else {
                s.y[k - 1 - dx] = v;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Max over cell centres of |exact(p) - table(p)| with `exact` evaluated by
// the engine.
template <class Exact>
double sampled_gap(const Engine& eng, const GridSpec& g, const FunctionTable& table, const SolveConfig& cfg,
                   bool coupled, Exact exact, std::size_t* count) {
    const auto samples = cell_centres(g, eng.discrete(), cfg.residual_samples, cfg.seed);
    if (count) *count = samples.size();
    double worst = 0.0;
    TauCache c;
    bool have = false;
    Paths p;
    double val[kMaxDim];
    for (const auto& s : samples) {
        if (!have || c.tau != s.t) {
            c = eng.cache(s.t);
            have = true;
        }
        eng.paths(c, s.x, s.y, coupled, p);
        exact(c, s.x, p, val);
        const Vec ih = table.eval(s.t, s.x, s.y);
        double d2 = 0.0;
        for (int i = 0; i < table.out_dim(); ++i) d2 += (val[i] - ih[i]) * (val[i] - ih[i]);
        worst = std::max(worst, std::sqrt(d2));
    }
    return worst;
}

FunctionTable solve_h_impl(const Model& m, const GridSpec& g, const SolveConfig& cfg, SolveInfo* info) {
    check_grid(m, g);
    const auto hyp = solver_hypothesis(m, cfg, &g.tau);
    const double q = hyp.q_value;
    const Engine eng(m, cfg, g.tau.lo, tau_hi(g.tau));
    const int d = m.sys.dim_x;
    const bool disc = m.sys.discrete();
    FunctionTable h(g.tau, g.x, g.y, d, disc);
    FunctionTable next = h;

    const auto xs = axis_points(g.x);
    const auto ys = axis_points(g.y);
    std::vector<TauCache> caches;
    std::vector<std::vector<Paths>> paths(g.tau.n);
    bool tau_clamped = false;
    const Vec zero_x = Vec::Zero(d);
    for (int i = 0; i < g.tau.n; ++i) {
        caches.push_back(eng.cache(g.tau.node(i)));
        if (g.tau.n > 1) tau_clamped = tau_clamped || Engine::outside(caches.back(), g.tau.lo, tau_hi(g.tau));
        paths[i].resize(ys.size());
        for (std::size_t iy = 0; iy < ys.size(); ++iy) eng.paths(caches[i], zero_x, ys[iy], false, paths[i][iy]);
    }

    SolveInfo si;
    si.q_value = q;
    si.N_value = hyp.N_value;
    si.L = eng.L();
    si.tail = eng.tail();
    si.tau_clamped = tau_clamped;
    const double stop = cfg.quad.tol * (1.0 - q);
    bool converged = false;
    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        std::size_t idx = 0;
        for (int i = 0; i < g.tau.n; ++i) {
            for (const auto& xi : xs) {
                for (std::size_t iy = 0; iy < ys.size(); ++iy, ++idx) {
                    eng.apply_h(caches[i], xi, paths[i][iy], h, next.data().data() + idx * d);
                }
            }
        }
        const double delta = kernels::max_abs_diff(next.data(), h.data());
        std::swap(h.data(), next.data());
        si.deltas.push_back(delta);
        si.sweeps = sweep;
        if (delta <= stop) {
            converged = true;
            break;
        }
    }
    if (!converged) throw ConvergenceError("Picard iteration did not reach the tolerance", si.deltas);

    si.node_residual = q * si.deltas.back();
    si.cell_residual = sampled_gap(
        eng, g, h, cfg, false,
        [&](const TauCache& c, const Vec& xi, const Paths& p, double* out) { eng.apply_h(c, xi, p, h, out); },
        &si.cells_sampled);
    si.error_budget = (std::max(si.node_residual, si.cell_residual) + si.tail) / (1.0 - q);
    si.sup_norm = h.sup_norm();
    if (info) *info = si;
    return h;
}

FunctionTable compute_hbar_impl(const Model& m, const GridSpec& g, const SolveConfig& cfg, SolveInfo* info) {
    check_grid(m, g);
    const auto hyp = solver_hypothesis(m, cfg, &g.tau);
    const Engine eng(m, cfg, g.tau.lo, tau_hi(g.tau));
    const int d = m.sys.dim_x;
    FunctionTable hb(g.tau, g.x, g.y, d, m.sys.discrete());
    const auto xs = axis_points(g.x);
    const auto ys = axis_points(g.y);
    Paths p;
    std::size_t idx = 0;
    for (int i = 0; i < g.tau.n; ++i) {
        const TauCache c = eng.cache(g.tau.node(i));
        for (const auto& xi : xs) {
            for (const auto& eta : ys) {
                eng.paths(c, xi, eta, true, p);
                eng.apply_hbar(c, p, hb.data().data() + idx * d);
                ++idx;
            }
        }
    }
    SolveInfo si;
    si.sweeps = 1;
    si.q_value = hyp.q_value;
    si.N_value = hyp.N_value;
    si.L = eng.L();
    si.tail = eng.tail();
    si.cell_residual = sampled_gap(
        eng, g, hb, cfg, true,
        [&](const TauCache& c, const Vec&, const Paths& pp, double* out) { eng.apply_hbar(c, pp, out); },
        &si.cells_sampled);
    si.error_budget = si.cell_residual + si.tail;
    si.sup_norm = hb.sup_norm();
    if (info) *info = si;
    return hb;
}

void require_kind(const Model& m, bool discrete) {
    if (m.sys.discrete() != discrete) {
        throw ValidationError(discrete ? "discrete solver called with a continuous system"
                                       : "continuous solver called with a discrete system");
    }
}

}  // namespace

GridSpec box_grid(const Model& m, int nx, int ny, Axis tau) {
    if (nx < 1 || ny < 1) throw ValidationError("grid needs at least one node per axis");
    GridSpec g;
    g.tau = m.sys.autonomous ? Axis{0.0, 0.0, 1} : tau;
    const auto& b = m.sys.box;
    for (int i = 0; i < m.sys.dim_x; ++i) g.x.push_back({-b.x_half, b.x_half, nx});
    for (int j = 0; j < m.sys.dim_y; ++j) g.y.push_back({-b.y_half, b.y_half, ny});
    return g;
}

HypothesisReport solver_hypothesis(const Model& m, const SolveConfig& cfg, const Axis* tau) {
    auto rep = hypothesis_N_q(m, cfg.quad);
    if (tau && tau->n > 1 && cfg.quad.taus.empty() && !m.sys.autonomous) {
        QuadConfig q = cfg.quad;
        for (int i = 0; i < tau->n; ++i) q.taus.push_back(tau->node(i));
        const auto on_table = hypothesis_N_q(m, q);
        rep.N_value = std::max(rep.N_value, on_table.N_value);
        rep.q_value = std::max(rep.q_value, on_table.q_value);
    }
    if (!(rep.q_value < 1.0) || !std::isfinite(rep.N_value)) {
        throw HypothesisError("contraction hypothesis fails: q = " + std::to_string(rep.q_value));
    }
    return rep;
}

FunctionTable solve_h(const Model& m, const GridSpec& grid, const SolveConfig& cfg, SolveInfo* info) {
    require_kind(m, false);
    return solve_h_impl(m, grid, cfg, info);
}

FunctionTable compute_hbar(const Model& m, const GridSpec& grid, const SolveConfig& cfg, SolveInfo* info) {
    require_kind(m, false);
    return compute_hbar_impl(m, grid, cfg, info);
}

FunctionTable solve_h_discrete(const Model& m, const GridSpec& grid, const SolveConfig& cfg, SolveInfo* info) {
    require_kind(m, true);
    return solve_h_impl(m, grid, cfg, info);
}

FunctionTable compute_hbar_discrete(const Model& m, const GridSpec& grid, const SolveConfig& cfg,
                                    SolveInfo* info) {
    require_kind(m, true);
    return compute_hbar_impl(m, grid, cfg, info);
}

ConjugacyPair solve_pair(const Model& m, const GridSpec& grid, const SolveConfig& cfg) {
    ConjugacyPair p{m, cfg, {}, {}, {}, {}};
    p.h = solve_h_impl(m, grid, cfg, &p.h_info);
    p.hbar = compute_hbar_impl(m, grid, cfg, &p.hbar_info);
    return p;
}

FlowState eval_conjugacy(const ConjugacyPair& p, double t, const Vec& x, const Vec& y, Direction dir,
                         bool* clamped) {
    const auto& tab = dir == Direction::forward ? p.h : p.hbar;
    return {x + tab.eval(t, x, y, clamped), y};
}

}  // namespace lin

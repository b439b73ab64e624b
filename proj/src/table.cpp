#include "lin/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "lin/error.hpp"
#include "lin/kernels.hpp"

namespace lin {

namespace {

constexpr char kMagic[8] = {'L', 'I', 'N', 'T', 'A', 'B', '0', '1'};

template <class T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw ValidationError("truncated table file");
    return v;
}

}  // namespace

AxisHit locate(const Axis& a, double v) {
    AxisHit h;
    if (a.n <= 1) return h;
    const double u = (v - a.lo) / a.step();
    const double r = std::round(u);
    if (std::abs(u - r) < 1e-12) {
        if (r < 0.0) return {0, 0.0, true};
        if (r > a.n - 1) return {a.n - 1, 0.0, true};
        h.i0 = static_cast<int>(r);
        return h;
    }
    if (u < 0.0) return {0, 0.0, true};
    if (u > a.n - 1) return {a.n - 1, 0.0, true};
    h.i0 = static_cast<int>(std::floor(u));
    h.frac = u - h.i0;
    return h;
}

FunctionTable::FunctionTable(Axis tau, std::vector<Axis> x, std::vector<Axis> y, int out_dim, bool discrete)
    : dim_x_(static_cast<int>(x.size())), dim_y_(static_cast<int>(y.size())), out_dim_(out_dim), discrete_(discrete) {
    if (dim_x_ < 1 || dim_x_ > kMaxDim || dim_y_ > kMaxDim || out_dim < 1 || out_dim > kMaxDim) {
        throw ValidationError("table dimensions out of range");
    }
    axes_.push_back(tau);
    axes_.insert(axes_.end(), x.begin(), x.end());
    axes_.insert(axes_.end(), y.begin(), y.end());
    for (const auto& a : axes_) {
        if (a.n < 1) throw ValidationError("axis needs at least one node");
        if (a.n > 1 && !(a.hi > a.lo)) throw ValidationError("axis bounds must satisfy lo < hi");
    }
    strides_.assign(axes_.size(), 1);
    for (int k = static_cast<int>(axes_.size()) - 2; k >= 0; --k) {
        strides_[k] = strides_[k + 1] * static_cast<std::size_t>(axes_[k + 1].n);
    }
    count_ = strides_[0] * static_cast<std::size_t>(axes_[0].n);
    values_.assign(count_ * out_dim_, 0.0);
}

std::vector<int> FunctionTable::multi_index(std::size_t idx) const {
    std::vector<int> mi(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        mi[k] = static_cast<int>(idx / strides_[k]);
        idx %= strides_[k];
    }
    return mi;
}

std::size_t FunctionTable::flat_index(const std::vector<int>& mi) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k) idx += strides_[k] * static_cast<std::size_t>(mi[k]);
    return idx;
}

void FunctionTable::node(std::size_t idx, double& t, Vec& x, Vec& y) const {
    const auto mi = multi_index(idx);
    t = axes_[0].node(mi[0]);
    x.resize(dim_x_);
    y.resize(dim_y_);
    for (int i = 0; i < dim_x_; ++i) x[i] = axes_[1 + i].node(mi[1 + i]);
    for (int j = 0; j < dim_y_; ++j) y[j] = axes_[1 + dim_x_ + j].node(mi[1 + dim_x_ + j]);
}

Vec FunctionTable::value(std::size_t idx) const {
    Vec v(out_dim_);
    for (int c = 0; c < out_dim_; ++c) v[c] = values_[idx * out_dim_ + c];
    return v;
}

void FunctionTable::set_value(std::size_t idx, const Vec& v) {
    for (int c = 0; c < out_dim_; ++c) values_[idx * out_dim_ + c] = v[c];
}

void FunctionTable::eval_into(double t, const double* x, const double* y, double* out, bool* clamped) const {
    const int na = static_cast<int>(axes_.size());
    std::size_t base = 0;
    int active[1 + 2 * kMaxDim];
    double frac[1 + 2 * kMaxDim];
    int k = 0;
    bool cl = false;
    for (int a = 0; a < na; ++a) {
        const double v = a == 0 ? t : (a <= dim_x_ ? x[a - 1] : y[a - 1 - dim_x_]);
        const AxisHit h = locate(axes_[a], v);
        if (a > 0) cl = cl || h.clamped;
        base += strides_[a] * static_cast<std::size_t>(h.i0);
        if (h.frac > 0.0) {
            active[k] = a;
            frac[k] = h.frac;
            ++k;
        }
    }
    if (clamped) *clamped = cl;
    for (int c = 0; c < out_dim_; ++c) out[c] = 0.0;
    const unsigned corners = 1u << k;
    for (unsigned m = 0; m < corners; ++m) {
        double w = 1.0;
        std::size_t idx = base;
        for (int b = 0; b < k; ++b) {
            if (m & (1u << b)) {
                w *= frac[b];
                idx += strides_[active[b]];
            } else {
                w *= 1.0 - frac[b];
            }
        }
        const double* v = values_.data() + idx * out_dim_;
        for (int c = 0; c < out_dim_; ++c) out[c] += w * v[c];
    }
}

Vec FunctionTable::eval(double t, const Vec& x, const Vec& y, bool* clamped, bool* tau_clamped) const {
    if (x.size() != dim_x_ || y.size() != dim_y_) throw ValidationError("table evaluation with wrong dimensions");
    if (tau_clamped) *tau_clamped = locate(axes_[0], t).clamped;
    Vec out(out_dim_);
    eval_into(t, x.data(), y.data(), out.data(), clamped);
    return out;
}

bool FunctionTable::inside(const Vec& x, const Vec& y) const {
    for (int i = 0; i < dim_x_; ++i) {
        if (locate(x_axis(i), x[i]).clamped) return false;
    }
    for (int j = 0; j < dim_y_; ++j) {
        if (locate(y_axis(j), y[j]).clamped) return false;
    }
    return true;
}

double FunctionTable::sup_norm() const {
    if (out_dim_ == 1) return kernels::max_abs(values_);
    double m = 0.0;
    for (std::size_t i = 0; i < count_; ++i) m = std::max(m, value(i).norm());
    return m;
}

double FunctionTable::lipschitz_xy() const {
    double sum = 0.0;
    for (std::size_t a = 1; a < axes_.size(); ++a) {
        if (axes_[a].n < 2) continue;
        const double step = axes_[a].step();
        double s = 0.0;
        for (std::size_t i = 0; i < count_; ++i) {
            const int pos = static_cast<int>((i / strides_[a]) % axes_[a].n);
            if (pos + 1 >= axes_[a].n) continue;
            const std::size_t j = i + strides_[a];
            double d2 = 0.0;
            for (int c = 0; c < out_dim_; ++c) {
                const double d = values_[j * out_dim_ + c] - values_[i * out_dim_ + c];
                d2 += d * d;
            }
            s = std::max(s, std::sqrt(d2) / step);
        }
        sum += s * s;
    }
    return std::sqrt(sum);
}

void FunctionTable::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ValidationError("cannot write " + path);
    std::fprintf(f, "t");
    for (int i = 0; i < dim_x_; ++i) std::fprintf(f, ",x%d", i + 1);
    for (int j = 0; j < dim_y_; ++j) std::fprintf(f, ",y%d", j + 1);
    for (int c = 0; c < out_dim_; ++c) std::fprintf(f, ",h%d", c + 1);
    std::fprintf(f, "\n");
    double t;
    Vec x, y;
    for (std::size_t i = 0; i < count_; ++i) {
        node(i, t, x, y);
        std::fprintf(f, "%.17g", t);
        for (int k = 0; k < dim_x_; ++k) std::fprintf(f, ",%.17g", x[k]);
        for (int k = 0; k < dim_y_; ++k) std::fprintf(f, ",%.17g", y[k]);
        for (int c = 0; c < out_dim_; ++c) std::fprintf(f, ",%.17g", values_[i * out_dim_ + c]);
        std::fprintf(f, "\n");
    }
    std::fclose(f);
}

void FunctionTable::write_binary(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot write " + path);
    os.write(kMagic, sizeof kMagic);
    put<std::int32_t>(os, discrete_ ? 1 : 0);
    put<std::int32_t>(os, dim_x_);
    put<std::int32_t>(os, dim_y_);
    put<std::int32_t>(os, out_dim_);
    for (const auto& a : axes_) {
        put<double>(os, a.lo);
        put<double>(os, a.hi);
        put<std::int32_t>(os, a.n);
    }
    os.write(reinterpret_cast<const char*>(values_.data()),
             static_cast<std::streamsize>(values_.size() * sizeof(double)));
}

FunctionTable FunctionTable::read_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot read " + path);
    char magic[sizeof kMagic];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw ValidationError("not a table file: " + path);
    const bool discrete = get<std::int32_t>(is) != 0;
    const int dx = get<std::int32_t>(is);
    const int dy = get<std::int32_t>(is);
    const int od = get<std::int32_t>(is);
    if (dx < 1 || dx > kMaxDim || dy < 0 || dy > kMaxDim) throw ValidationError("bad table header");
    std::vector<Axis> ax(1 + dx + dy);
    for (auto& a : ax) {
        a.lo = get<double>(is);
        a.hi = get<double>(is);
        a.n = get<std::int32_t>(is);
    }
    FunctionTable t(ax[0], std::vector<Axis>(ax.begin() + 1, ax.begin() + 1 + dx),
                    std::vector<Axis>(ax.begin() + 1 + dx, ax.end()), od, discrete);
    is.read(reinterpret_cast<char*>(t.values_.data()), static_cast<std::streamsize>(t.values_.size() * sizeof(double)));
    if (!is) throw ValidationError("truncated table file");
    return t;
}

}  // namespace lin

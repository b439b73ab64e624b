#pragma once

// Grid-sampled vector function over (t, x, y) with multilinear interpolation
// and clamping to the box.

#include <cstddef>
#include <string>
#include <vector>

#include "lin/linalg.hpp"

namespace lin {

/// Uniform axis lo, lo + step, ..., hi with n nodes. n = 1 is a constant
/// axis: every coordinate maps onto its single node without clamping.
struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    int n = 1;

    double step() const { return n > 1 ? (hi - lo) / (n - 1) : 0.0; }
    double node(int i) const { return n > 1 ? lo + step() * i : lo; }
};

/// Result of locating a coordinate on an axis.
struct AxisHit {
    int i0 = 0;
    double frac = 0.0;
    bool clamped = false;
};

AxisHit locate(const Axis& a, double v);

class FunctionTable {
public:
    FunctionTable() = default;
    FunctionTable(Axis tau, std::vector<Axis> x, std::vector<Axis> y, int out_dim, bool discrete = false);

    const Axis& tau_axis() const { return axes_[0]; }
    const Axis& x_axis(int i) const { return axes_[1 + i]; }
    const Axis& y_axis(int j) const { return axes_[1 + dim_x_ + j]; }
    const std::vector<Axis>& axes() const { return axes_; }
    int dim_x() const { return dim_x_; }
    int dim_y() const { return dim_y_; }
    int out_dim() const { return out_dim_; }
    bool discrete() const { return discrete_; }

    std::size_t node_count() const { return count_; }

    /// Node coordinates; multi-index order is tau slowest, then x, then y.
    void node(std::size_t idx, double& t, Vec& x, Vec& y) const;
    std::vector<int> multi_index(std::size_t idx) const;
    std::size_t flat_index(const std::vector<int>& mi) const;

    Vec value(std::size_t idx) const;
    void set_value(std::size_t idx, const Vec& v);
    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    /// Multilinear interpolation. x and y outside the box are clamped to the
    /// nearest face and *clamped is set; t outside the tau axis is clamped
    /// silently (*tau_clamped reports it).
    Vec eval(double t, const Vec& x, const Vec& y, bool* clamped = nullptr, bool* tau_clamped = nullptr) const;

    /// Same into a caller buffer of length out_dim (no allocation).
    void eval_into(double t, const double* x, const double* y, double* out, bool* clamped = nullptr) const;

    /// True when (x, y) lies inside the box (t ignored).
    bool inside(const Vec& x, const Vec& y) const;

    double sup_norm() const;

    /// Sum over axes of (max slope along the axis)^2, square-rooted: a
    /// Lipschitz constant of the interpolant in (x, y) (Euclidean norms).
    double lipschitz_xy() const;

    void write_csv(const std::string& path) const;
    void write_binary(const std::string& path) const;
    static FunctionTable read_binary(const std::string& path);

private:
    std::vector<Axis> axes_;
    std::vector<std::size_t> strides_;
    int dim_x_ = 0;
    int dim_y_ = 0;
    int out_dim_ = 1;
    bool discrete_ = false;
    std::size_t count_ = 0;
    std::vector<double> values_;
};

}  // namespace lin

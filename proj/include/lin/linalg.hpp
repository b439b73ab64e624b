#pragma once

#include <Eigen/Dense>

namespace lin {

/// State dimensions never exceed this; vectors and matrices live on the stack.
inline constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// Euclidean norm; zero for empty vectors.
inline double norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.norm(); }

/// Operator norm induced by the Euclidean norm (largest singular value).
double op_norm(const Mat& m);

inline Mat identity(int n) { return Mat::Identity(n, n); }

}  // namespace lin

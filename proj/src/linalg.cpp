#include "lin/linalg.hpp"

#include <cmath>

namespace lin {

double op_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    if (m.rows() == 1) return m.row(0).norm();
    if (m.cols() == 1) return m.col(0).norm();
    const Mat gram = m.transpose() * m;
    // Diagonal matrices are common (projections, saddles); skip the solver.
    if (gram.isDiagonal(0.0)) {
        return std::sqrt(gram.diagonal().maxCoeff());
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace lin

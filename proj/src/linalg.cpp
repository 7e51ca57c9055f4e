#include "polyrep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polyrep {

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double lambda_max(const Matrix& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix nullspace(const Matrix& m, double rel_threshold) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_threshold * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff && sv(k) > 0.0) ++rank;
  }
  return svd.matrixV().rightCols(cols - rank);
}

int numerical_rank(const Matrix& m, double rel_threshold) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_threshold * sv(0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff && sv(k) > 0.0) ++rank;
  }
  return rank;
}

Matrix orthonormal_columns(const Matrix& m, double rel_threshold) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_threshold * sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff && sv(k) > 0.0) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

double max_principal_angle(const Matrix& a, const Matrix& b) {
  const Matrix qa = orthonormal_columns(a);
  const Matrix qb = orthonormal_columns(b);
  if (qa.cols() != qb.cols()) return std::numbers::pi / 2;
  if (qa.cols() == 0) return 0.0;
  // sin of the largest angle is the norm of the part of qb outside span(qa);
  // acos of the cosines loses half the digits near zero angle.
  const Matrix residual = qb - qa * (qa.transpose() * qb);
  return std::asin(std::min(1.0, spectral_norm(residual)));
}

bool is_integer_valued(const Matrix& m) {
  return std::all_of(m.data(), m.data() + m.size(),
                     [](double v) { return std::isfinite(v) && v == std::round(v); });
}

double zero_threshold(const Matrix& m, double rel) {
  if (m.size() == 0 || is_integer_valued(m)) return 0.0;
  return rel * std::max(1.0, m.cwiseAbs().maxCoeff());
}

}  // namespace polyrep

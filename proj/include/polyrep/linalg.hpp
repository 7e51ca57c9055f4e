#pragma once

#include <Eigen/Dense>

namespace polyrep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Default tolerances shared across modules.
inline constexpr double kSemidefTol = 1e-9;
inline constexpr double kRankTol = 1e-10;
inline constexpr double kEqualTol = 1e-12;

/// Symmetric part (M + M^T) / 2.
Matrix sym(const Matrix& m);

/// Largest eigenvalue of a symmetric matrix; 0 for an empty matrix.
double lambda_max(const Matrix& symmetric);

/// Largest absolute entry; 0 for an empty matrix.
double max_abs(const Matrix& m);

/// Spectral norm (largest singular value); 0 for an empty matrix.
double spectral_norm(const Matrix& m);

/// Orthonormal basis (as columns) of Ker(m). Singular values below
/// rel_threshold * sigma_max count as zero.
Matrix nullspace(const Matrix& m, double rel_threshold = kRankTol);

int numerical_rank(const Matrix& m, double rel_threshold = kRankTol);

/// Orthonormal basis of the column space of m.
Matrix orthonormal_columns(const Matrix& m, double rel_threshold = kRankTol);

/// Largest principal angle (radians) between the column spans of a and b.
/// Subspaces of different dimension are reported at pi/2.
double max_principal_angle(const Matrix& a, const Matrix& b);

bool is_integer_valued(const Matrix& m);

/// Magnitude below which entries of m count as zero: 0 for integer-valued
/// matrices, else rel * max(1, max|m_ij|).
double zero_threshold(const Matrix& m, double rel = kEqualTol);

}  // namespace polyrep

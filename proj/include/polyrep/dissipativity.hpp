#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyrep/game.hpp"
#include "polyrep/vertex_forms.hpp"

namespace polyrep {

enum class GameKind { conservative, dissipative, indefinite, no_formal_equilibrium };

std::string to_string(GameKind kind);

/// Outcome of testing Q_{AD} on H for one scaling D.
///
/// Semidefiniteness is decided on Sym(A_v D_v) at the first vertex, which
/// represents Q_{AD} on H in the vertex basis. Eigenvalues within
/// tol * max(1, ||A_v D_v||_2) of zero count as zero.
struct Classification {
  GameKind kind = GameKind::no_formal_equilibrium;
  std::optional<DiagonalScaling> scaling;
  /// For indefinite: w in H with Q_{AD}(w) > 0.
  std::optional<Vector> witness;
  double lambda_max = 0.0;
};

struct StableDissipativityReport {
  bool stable = false;
  bool cycle_ok = false;
  bool skew_ok = false;
  /// Per-index positive diagonal making M D almost skew-symmetric.
  std::optional<Vector> scaling;
  std::vector<std::string> failures;
};

struct ScalingSearch {
  std::optional<DiagonalScaling> certificate;
  DiagonalScaling best = DiagonalScaling::identity(1);
  double best_lambda_max = 0.0;
};

struct Admissibility {
  bool admissible = false;
  Classification classification;
  std::vector<VertexLabel> stable_vertices;  // V*, lexicographic
  std::vector<StableDissipativityReport> reports;  // one per vertex, enumeration order
};

/// A D^{-1}-free split: A D = skew + equal_rows, so (n, A) ~ (n, skew D^{-1}).
struct SkewDecomposition {
  Matrix skew;
  Matrix equal_rows;
};

/// Throws std::invalid_argument if d does not match the game's groups.
Classification check_with_scaling(const PolymatrixGame& game, const DiagonalScaling& d,
                                  double tol = kSemidefTol);

/// Searches log-parameterized scalings (d_1 = 1) minimizing
/// lambda_max(Sym(A_v D_v)) from several deterministic starts. A missing
/// certificate is not a proof that none exists.
ScalingSearch search_scaling(const PolymatrixGame& game, double tol = kSemidefTol,
                             std::uint64_t seed = 0, int starts = 16);

std::optional<DiagonalScaling> find_scaling(const PolymatrixGame& game, double tol = kSemidefTol);

/// Formal-equilibrium test plus find_scaling; indefinite when no
/// certificate was found (witness taken at the best scaling seen).
Classification classify_game(const PolymatrixGame& game, double tol = kSemidefTol);

/// Throws std::invalid_argument unless check_with_scaling(game, d) is
/// conservative.
SkewDecomposition skew_decomposition(const PolymatrixGame& game, const DiagonalScaling& d,
                                     double tol = kSemidefTol);

bool almost_skew_symmetric(const Matrix& m, double tol = kSemidefTol);

std::optional<Vector> find_almost_skew_scaling(const Matrix& m, double tol = kSemidefTol);

/// Zhao-Luo test: every cycle of G(M) has a strong link, and some positive
/// diagonal makes M D almost skew-symmetric.
StableDissipativityReport stably_dissipative(const Matrix& m, double tol = kSemidefTol);

Admissibility admissible(const PolymatrixGame& game, double tol = kSemidefTol);
/// Same, with the dissipativity certificate supplied by the caller.
Admissibility admissible(const PolymatrixGame& game, const DiagonalScaling& d,
                         double tol = kSemidefTol);

/// Ker(M) == D Ker(M^T), by largest principal angle <= angle_tol. False when
/// M D is not dissipative.
bool kernel_duality(const Matrix& m, const Vector& d, double angle_tol = 1e-8,
                    double tol = kSemidefTol);

}  // namespace polyrep

#pragma once

#include <stdexcept>
#include <vector>

#include "polyrep/dissipativity.hpp"
#include "polyrep/game.hpp"
#include "polyrep/vertex_forms.hpp"

namespace polyrep {

/// Raised when a step of the Hamiltonian collapse fails a check that the
/// theory guarantees; signals a numerical or implementation problem.
class CertificateFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReductionStep {
  int removed = 0;           // original strategy index
  int removed_current = 0;   // index in the game the step was applied to
  int group = 0;             // group index in that game
  double q_ell = 0.0;
  GameType before;
  GameType after;
  double scaling_factor = 1.0;  // 1 / (1 - q_ell), applied to the group
  bool group_dropped = false;   // the group shrank to one pinned strategy
};

/// Identification of the slice {x_l = q_l, l in Q} with the reduced prism:
/// y_k = x[kept[k]] * scale[k].
struct SliceMap {
  std::vector<int> kept;
  Vector scale;

  Vector apply(const Vector& x) const;
  /// Inverse on the slice, filling removed coordinates from q.
  Vector lift(const Vector& y, const Vector& q) const;
};

struct SetReduction {
  PolymatrixGame game;
  Vector equilibrium;
  SliceMap psi;
  std::vector<ReductionStep> steps;
};

struct CollapseResult {
  std::vector<ReductionStep> steps;
  PolymatrixGame final_game;
  Vector final_equilibrium;
  DiagonalScaling certificate = DiagonalScaling::identity(1);
  VertexLabel vertex;  // the transported vertex of V*
  SliceMap psi;
};

/// (q,l)-reduction. Throws std::invalid_argument unless 0 < q_l < 1 and the
/// group of l has at least two strategies.
PolymatrixGame q_ell_reduction(const PolymatrixGame& game, const Vector& q, int ell);

/// q restricted to the surviving strategies, with l's group rescaled by
/// 1 / (1 - q_l).
Vector reduce_equilibrium(const GameType& type, const Vector& q, int ell);

/// Removes a group with a single strategy s (frequency pinned to 1). The
/// column of s is folded into each row's own-group block, which is exact on
/// the prism. Throws std::invalid_argument if the group size is not 1.
PolymatrixGame drop_singleton_group(const PolymatrixGame& game, int group);

/// (q,l)-reduction of a strategy in a group of two, followed by removal of
/// the remaining pinned strategy. Throws std::invalid_argument unless the
/// group of l has exactly two strategies.
PolymatrixGame cardinal2_cleanup(const PolymatrixGame& game, const Vector& q, int ell);

/// Sequential reductions over Q (descending index), dropping groups that
/// shrink to one strategy.
SetReduction reduce_by_set(const PolymatrixGame& game, const Vector& q, std::vector<int> strategies);

/// Iterated reduction along a stable vertex until its matrix has a zero
/// diagonal. Throws std::invalid_argument for non-admissible games or
/// non-interior / non-equilibrium q; throws CertificateFailure when an
/// intermediate game is not admissible or the final game is not certified
/// conservative.
CollapseResult hamiltonian_collapse(const PolymatrixGame& game, const Vector& q,
                                    double tol = kSemidefTol);
CollapseResult hamiltonian_collapse(const PolymatrixGame& game, double tol = kSemidefTol);

}  // namespace polyrep

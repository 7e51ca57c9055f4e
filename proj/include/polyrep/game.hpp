#pragma once

#include <string>
#include <vector>

#include "polyrep/linalg.hpp"

namespace polyrep {

/// Group sizes (n_1, ..., n_p) of a polymatrix game. Strategies are indexed
/// 0..n-1 internally and partition into contiguous blocks, one per group.
class GameType {
 public:
  GameType() = default;
  /// Throws std::invalid_argument unless every group size is >= 1 and p >= 1.
  explicit GameType(std::vector<int> groups);

  int n() const { return static_cast<int>(group_of_.size()); }
  int p() const { return static_cast<int>(groups_.size()); }
  const std::vector<int>& groups() const { return groups_; }

  int group_size(int group) const { return groups_[group]; }
  int group_begin(int group) const { return offsets_[group]; }
  int group_end(int group) const { return offsets_[group] + groups_[group]; }
  int group_of(int strategy) const { return group_of_[strategy]; }

  bool operator==(const GameType& other) const { return groups_ == other.groups_; }

  /// "(3,2)" style label.
  std::string label() const;

 private:
  std::vector<int> groups_;
  std::vector<int> offsets_;
  std::vector<int> group_of_;
};

/// A game type plus an n x n payoff matrix. Row i holds the payoffs of
/// strategy i against every strategy. Consistency is checked by
/// validate_game(); make_game() throws on any violation.
struct PolymatrixGame {
  GameType type;
  Matrix payoff;
};

/// Positive per-group scaling, expanded to diag(d_i) constant on groups.
class DiagonalScaling {
 public:
  /// Throws std::invalid_argument on empty or non-positive entries.
  explicit DiagonalScaling(Vector per_group);
  static DiagonalScaling identity(int groups);

  const Vector& per_group() const { return d_; }
  int p() const { return static_cast<int>(d_.size()); }
  /// Length-n diagonal for the given type; throws if p mismatches.
  Vector expand(const GameType& type) const;

 private:
  Vector d_;
};

/// Point of the prism: non-negative with unit sum in every group.
class PrismState {
 public:
  /// Throws std::invalid_argument when x is not on the prism within tol.
  PrismState(const GameType& type, Vector x, double tol = kSemidefTol);
  const Vector& values() const { return x_; }

 private:
  Vector x_;
};

/// Affine set q + span(basis) of formal equilibria. `consistent` is false
/// when the defining linear system has no solution; `interior` reports
/// whether a strictly positive member was found (and then `particular` is
/// that member).
struct EquilibriumSet {
  bool consistent = false;
  Vector particular;
  Matrix basis;
  bool interior = false;

  int dimension() const { return static_cast<int>(basis.cols()); }
};

std::vector<std::string> validate_game(const PolymatrixGame& game);

/// Throws std::invalid_argument listing the violations of validate_game.
PolymatrixGame make_game(GameType type, Matrix payoff);

PolymatrixGame zero_game(const GameType& type);

/// True iff every block of c has identical rows. Exact comparison when c
/// is integer valued, else absolute tolerance tol.
bool has_equal_row_blocks(const GameType& type, const Matrix& c, double tol = kEqualTol);

/// Equivalence of games of the same type; throws std::invalid_argument on
/// a type mismatch.
bool games_equivalent(const PolymatrixGame& a, const PolymatrixGame& b);

/// Equivalent game whose row `strategy` is identically zero.
PolymatrixGame zero_row_representative(const PolymatrixGame& game, int strategy);

/// Replicator velocity at x. Component i in group a is
/// x_i ((Ax)_i - sum_{k in a} x_k (Ax)_k).
Vector vector_field(const PolymatrixGame& game, const Vector& x);

/// Payoff matrix times diag(D), i.e. the game (n, A D).
PolymatrixGame times_diagonal(const PolymatrixGame& game, const DiagonalScaling& d);

bool on_prism(const GameType& type, const Vector& x, double tol = kSemidefTol);
bool in_tangent_space(const GameType& type, const Vector& w, double tol = 1e-10);
Vector barycenter(const GameType& type);

/// Orthonormal n x n basis whose first p columns are the normalized group
/// indicators (spanning H^perp) and remaining n-p columns span H.
Matrix adapted_orthonormal_basis(const GameType& type);

EquilibriumSet formal_equilibria(const PolymatrixGame& game);

/// Formal equilibria, with `interior` decided by testing the minimum-norm
/// solution and, failing that, maximizing the smallest coordinate over the
/// direction space.
EquilibriumSet interior_equilibria(const PolymatrixGame& game);

/// Largest |velocity| component, for equilibrium checks.
double max_speed(const PolymatrixGame& game, const Vector& x);

}  // namespace polyrep

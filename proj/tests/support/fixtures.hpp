#pragma once

// Shared test data: the worked (3,2) example, small classic games, and
// seeded random generators.

#include <random>
#include <vector>

#include "polyrep/game.hpp"
#include "polyrep/vertex_forms.hpp"

namespace fixtures {

using polyrep::GameType;
using polyrep::Matrix;
using polyrep::PolymatrixGame;
using polyrep::Vector;

inline PolymatrixGame example_game() {
  Matrix a(5, 5);
  a << -1, 8, -7, 3, -3,  //
      -10, -1, 11, 3, -3,  //
      11, -7, -4, -6, 6,   //
      -3, -3, 6, 0, 0,     //
      3, 3, -6, 0, 0;
  return PolymatrixGame{GameType({3, 2}), a};
}

inline Vector example_q() {
  Vector q(5);
  q << 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5, 0.5;
  return q;
}

/// The six printed vertex matrices, in enumeration order (1,4),(1,5),(2,4),(2,5),(3,4),(3,5).
inline std::vector<Matrix> example_vertex_matrices() {
  std::vector<Matrix> m(6, Matrix(3, 3));
  m[0] << 0, 27, 0, -27, -9, 18, 0, -18, 0;
  m[1] << 0, 27, 0, -27, -9, -18, 0, 18, 0;
  m[2] << 0, -27, 0, 27, -9, 18, 0, -18, 0;
  m[3] << 0, -27, 0, 27, -9, -18, 0, 18, 0;
  m[4] << -9, 18, -18, -36, -9, -18, 18, 18, 0;
  m[5] << -9, 18, 18, -36, -9, 18, -18, -18, 0;
  return m;
}

inline Matrix example_reduced_payoff() {
  Matrix a(4, 4);
  a << -9, 9, 9, -9, -9, 9, 9, -9, -6, 6, 6, -6, -6, 6, 6, -6;
  return a;
}

inline PolymatrixGame rps() {
  Matrix a(3, 3);
  a << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  return PolymatrixGame{GameType({3}), a};
}

inline polyrep::VertexLabel label(std::vector<int> one_based) {
  for (int& c : one_based) --c;
  return polyrep::VertexLabel{one_based};
}

inline GameType random_type(std::mt19937_64& rng, int max_groups = 3, int max_size = 3) {
  std::uniform_int_distribution<int> groups(1, max_groups), size(1, max_size);
  std::vector<int> g(groups(rng));
  for (int& s : g) s = size(rng);
  return GameType(g);
}

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, bool integer = false) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> k(-9, 9);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = integer ? k(rng) : u(rng);
  }
  return m;
}

inline PolymatrixGame random_game(std::mt19937_64& rng, const GameType& t, bool integer = false) {
  return PolymatrixGame{t, random_matrix(rng, t.n(), t.n(), integer)};
}

inline Vector random_state(std::mt19937_64& rng, const GameType& t) {
  std::exponential_distribution<double> e(1.0);
  Vector x(t.n());
  for (int a = 0; a < t.p(); ++a) {
    double s = 0;
    for (int i = t.group_begin(a); i < t.group_end(a); ++i) s += x(i) = e(rng) + 1e-3;
    for (int i = t.group_begin(a); i < t.group_end(a); ++i) x(i) /= s;
  }
  return x;
}

/// Uniform random vector projected onto zero group sums.
inline Vector random_tangent(std::mt19937_64& rng, const GameType& t) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector w(t.n());
  for (int i = 0; i < t.n(); ++i) w(i) = n(rng);
  for (int a = 0; a < t.p(); ++a) {
    const int b = t.group_begin(a), s = t.group_size(a);
    w.segment(b, s).array() -= w.segment(b, s).mean();
  }
  return w;
}

inline polyrep::DiagonalScaling random_scaling(std::mt19937_64& rng, int p, bool integer = false) {
  std::uniform_real_distribution<double> u(0.2, 5.0);
  std::uniform_int_distribution<int> k(1, 6);
  Vector d(p);
  for (int a = 0; a < p; ++a) d(a) = integer ? k(rng) : u(rng);
  return polyrep::DiagonalScaling(d);
}

/// Matrix whose blocks all have identical rows (zero effect on the flow).
inline Matrix random_equal_row_blocks(std::mt19937_64& rng, const GameType& t) {
  Matrix c(t.n(), t.n());
  for (int a = 0; a < t.p(); ++a) {
    const Matrix row = random_matrix(rng, 1, t.n());
    for (int i = t.group_begin(a); i < t.group_end(a); ++i) c.row(i) = row;
  }
  return c;
}

inline Matrix random_skew(std::mt19937_64& rng, int n) {
  const Matrix m = random_matrix(rng, n, n);
  return m - m.transpose();
}

/// Curated stably dissipative matrices: each has a tree (or forest) of
/// zero-diagonal links and strictly negative diagonal blocks elsewhere.
inline std::vector<Matrix> stable_matrices() {
  std::vector<Matrix> out;
  auto add = [&](std::initializer_list<double> vals, int n) {
    Matrix m(n, n);
    auto it = vals.begin();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = *it++;
    out.push_back(m);
  };
  add({-1}, 1);
  add({0}, 1);
  add({0, 0, 0, 0}, 2);
  add({-1, 0, 0, -2}, 2);
  add({0, 1, -1, 0}, 2);
  add({0, 1, -2, 0}, 2);
  add({-1, 3, -3, 0}, 2);
  add({-1, 2, -1, -1}, 2);
  add({0, 27, 0, -27, -9, 18, 0, -18, 0}, 3);
  add({0, 27, 0, -27, -9, -18, 0, 18, 0}, 3);
  add({0, 1, 0, -1, 0, 1, 0, -1, 0}, 3);
  add({-1, 1, 1, -1, -1, 1, -1, -1, -1}, 3);
  add({-2, 1, 0, -1, -2, 1, 0, -1, 0}, 3);
  add({0, 2, 0, -1, -1, 3, 0, -3, 0}, 3);
  add({-1, 0, 0, 0, -1, 0, 0, 0, -1}, 3);
  add({0, 1, 0, 0, -1, 0, 1, 0, 0, -1, -1, 1, 0, 0, -1, -1}, 4);
  add({-1, 1, 0, 0, -1, -1, 2, 0, 0, -2, 0, 1, 0, 0, -1, 0}, 4);
  add({-3, 1, 1, 0, -1, -3, 0, 1, -1, 0, -3, 1, 0, -1, -1, -3}, 4);
  add({0, 1, 0, 0, -1, -1, 1, 0, 0, -1, 0, 1, 0, 0, -1, -2}, 4);
  add({0, 5, 0, 0, -1, 0, 0, 0, 0, 0, -4, 2, 0, 0, -2, -1}, 4);
  return out;
}

/// Shifts each row by a constant (on its own group's block) so that q
/// becomes a formal equilibrium with (Aq)_i = 0. This changes the flow but
/// not the vertex matrices or Q_A on H.
inline PolymatrixGame with_equilibrium(PolymatrixGame g, const Vector& q) {
  const GameType& t = g.type;
  const Vector aq = g.payoff * q;
  for (int i = 0; i < t.n(); ++i) {
    const int a = t.group_of(i);
    for (int j = t.group_begin(a); j < t.group_end(a); ++j) g.payoff(i, j) -= aq(i);
  }
  return g;
}

/// Dissipative game S - E (S skew, E >= 0 diagonal with some zeros), moved
/// so that q is an interior equilibrium.
inline PolymatrixGame random_dissipative(std::mt19937_64& rng, const GameType& t, const Vector& q) {
  Matrix a = random_skew(rng, t.n());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < t.n(); ++i) {
    if (u(rng) < 0.5) a(i, i) -= 1.0 + 2.0 * u(rng);
  }
  return with_equilibrium(PolymatrixGame{t, a}, q);
}

}  // namespace fixtures

#include "polyrep/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace polyrep {

namespace {

GameType shrink_group(const GameType& t, int group, int by_one_or_drop) {
  std::vector<int> g = t.groups();
  if (by_one_or_drop == 0) {
    g.erase(g.begin() + group);
  } else {
    --g[group];
  }
  return GameType(g);
}

Matrix without(const Matrix& m, int idx) {
  const Eigen::Index n = m.rows();
  Matrix out(n - 1, n - 1);
  for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
    if (r == idx) continue;
    for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
      if (c == idx) continue;
      out(rr, cc++) = m(r, c);
    }
    ++rr;
  }
  return out;
}

Vector without(const Vector& v, int idx) {
  Vector out(v.size() - 1);
  for (Eigen::Index k = 0, kk = 0; k < v.size(); ++k) {
    if (k != idx) out(kk++) = v(k);
  }
  return out;
}

// Bookkeeping shared by reduce_by_set and hamiltonian_collapse.
struct Reducer {
  PolymatrixGame game;
  Vector q;
  std::vector<int> origin;  // current index -> original index
  Vector scale;             // current index -> accumulated factor
  std::vector<ReductionStep> steps;

  Reducer(const PolymatrixGame& g, const Vector& q0) : game(g), q(q0), scale(Vector::Ones(g.type.n())) {
    for (int i = 0; i < g.type.n(); ++i) origin.push_back(i);
  }

  int current_index(int original) const {
    const auto it = std::find(origin.begin(), origin.end(), original);
    return it == origin.end() ? -1 : static_cast<int>(it - origin.begin());
  }

  // Removes strategy `ell` (current index); returns the index of a group
  // that shrank to one strategy and was dropped, or -1.
  int remove(int ell) {
    const GameType before = game.type;
    const int group = before.group_of(ell);
    ReductionStep step;
    step.removed = origin[ell];
    step.removed_current = ell;
    step.group = group;
    step.q_ell = q(ell);
    step.before = before;
    step.scaling_factor = 1.0 / (1.0 - q(ell));

    for (int i = before.group_begin(group); i < before.group_end(group); ++i) scale(i) *= step.scaling_factor;
    game = q_ell_reduction(game, q, ell);
    q = reduce_equilibrium(before, q, ell);
    origin.erase(origin.begin() + ell);
    scale = without(scale, ell);

    int dropped = -1;
    if (game.type.group_size(group) == 1 && game.type.p() > 1) {
      const int s = game.type.group_begin(group);
      game = drop_singleton_group(game, group);
      q = without(q, s);
      origin.erase(origin.begin() + s);
      scale = without(scale, s);
      step.group_dropped = true;
      dropped = group;
    }
    step.after = game.type;
    steps.push_back(step);
    return dropped;
  }

  SliceMap psi() const { return SliceMap{origin, scale}; }
};

void require_interior_equilibrium(const PolymatrixGame& game, const Vector& q) {
  if (q.size() != game.type.n()) throw std::invalid_argument("equilibrium has wrong length");
  if (!on_prism(game.type, q) || (q.array() <= 0).any()) {
    throw std::invalid_argument("q is not an interior point of the prism");
  }
  const double scale = std::max(1.0, game.payoff.cwiseAbs().maxCoeff());
  if (max_speed(game, q) > 1e-9 * scale) throw std::invalid_argument("q is not an equilibrium");
}

}  // namespace

Vector SliceMap::apply(const Vector& x) const {
  Vector y(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) y(k) = x(kept[k]) * scale(k);
  return y;
}

Vector SliceMap::lift(const Vector& y, const Vector& q) const {
  Vector x = q;
  for (std::size_t k = 0; k < kept.size(); ++k) x(kept[k]) = y(k) / scale(k);
  return x;
}

PolymatrixGame q_ell_reduction(const PolymatrixGame& game, const Vector& q, int ell) {
  const GameType& t = game.type;
  if (ell < 0 || ell >= t.n()) throw std::invalid_argument("strategy index out of range");
  if (q.size() != t.n()) throw std::invalid_argument("equilibrium has wrong length");
  const double ql = q(ell);
  if (!(ql > 0.0 && ql < 1.0)) throw std::invalid_argument("q_l must lie strictly between 0 and 1");
  const int alpha = t.group_of(ell);
  if (t.group_size(alpha) < 2) throw std::invalid_argument("cannot remove the only strategy of a group");

  const Matrix& a = game.payoff;
  const int n = t.n();
  Matrix out(n - 1, n - 1);
  for (int i = 0, r = 0; i < n; ++i) {
    if (i == ell) continue;
    for (int j = 0, c = 0; j < n; ++j) {
      if (j == ell) continue;
      if (t.group_of(j) != alpha) {
        out(r, c) = a(i, j) - a(ell, j);
      } else {
        out(r, c) = (a(i, j) - a(ell, j)) * (1.0 - ql) + (a(i, ell) - a(ell, ell)) * ql;
      }
      ++c;
    }
    ++r;
  }
  return PolymatrixGame{shrink_group(t, alpha, 1), out};
}

Vector reduce_equilibrium(const GameType& type, const Vector& q, int ell) {
  const int alpha = type.group_of(ell);
  Vector out = without(q, ell);
  const double f = 1.0 / (1.0 - q(ell));
  for (int i = type.group_begin(alpha); i < type.group_end(alpha) - 1; ++i) out(i) *= f;
  return out;
}

PolymatrixGame drop_singleton_group(const PolymatrixGame& game, int group) {
  const GameType& t = game.type;
  if (group < 0 || group >= t.p() || t.group_size(group) != 1) {
    throw std::invalid_argument("only a group with a single strategy can be dropped");
  }
  if (t.p() == 1) throw std::invalid_argument("cannot drop the last group");
  const int s = t.group_begin(group);
  Matrix a = game.payoff;
  // x_s = 1 on the prism, and each row's own group sums to 1.
  for (int i = 0; i < t.n(); ++i) {
    if (i == s) continue;
    const int g = t.group_of(i);
    for (int j = t.group_begin(g); j < t.group_end(g); ++j) a(i, j) += game.payoff(i, s);
  }
  return PolymatrixGame{shrink_group(t, group, 0), without(a, s)};
}

PolymatrixGame cardinal2_cleanup(const PolymatrixGame& game, const Vector& q, int ell) {
  if (ell < 0 || ell >= game.type.n()) throw std::invalid_argument("strategy index out of range");
  const int alpha = game.type.group_of(ell);
  if (game.type.group_size(alpha) != 2) throw std::invalid_argument("cleanup needs a group of two strategies");
  return drop_singleton_group(q_ell_reduction(game, q, ell), alpha);
}

SetReduction reduce_by_set(const PolymatrixGame& game, const Vector& q, std::vector<int> strategies) {
  std::sort(strategies.begin(), strategies.end(), std::greater<>());
  strategies.erase(std::unique(strategies.begin(), strategies.end()), strategies.end());
  Reducer red(game, q);
  for (int l : strategies) {
    if (l < 0 || l >= game.type.n()) throw std::invalid_argument("strategy index out of range");
    const int cur = red.current_index(l);
    if (cur < 0) throw std::invalid_argument("strategy " + std::to_string(l + 1) + " was already eliminated");
    red.remove(cur);
  }
  return SetReduction{red.game, red.q, red.psi(), red.steps};
}

CollapseResult hamiltonian_collapse(const PolymatrixGame& game, const Vector& q, double tol) {
  require_interior_equilibrium(game, q);
  const Admissibility adm = admissible(game, tol);
  if (!adm.admissible) throw std::invalid_argument("Hamiltonian collapse requires an admissible game");
  Vector d = adm.classification.scaling->per_group();
  VertexLabel v = adm.stable_vertices.front();

  Reducer red(game, q);
  while (true) {
    const VertexMatrix vm = vertex_matrix(red.game, v);
    const double eps = zero_threshold(vm.entries, tol);
    int ell = -1;
    for (std::size_t r = 0; r < vm.index_set.size(); ++r) {
      if (vm.entries(r, r) < -eps) {
        ell = vm.index_set[r];
        break;
      }
    }
    if (ell < 0) break;
    const int alpha = red.game.type.group_of(ell);
    const double factor = 1.0 / (1.0 - red.q(ell));
    const int dropped = red.remove(ell);
    d(alpha) *= factor;
    // Transport the vertex: indices above ell shift down by one.
    for (int& c : v.chosen) {
      if (c > ell) --c;
    }
    if (dropped >= 0) {
      const int s = v.chosen[dropped];
      v.chosen.erase(v.chosen.begin() + dropped);
      for (int& c : v.chosen) {
        if (c > s) --c;
      }
      Vector nd(d.size() - 1);
      for (Eigen::Index k = 0, kk = 0; k < d.size(); ++k) {
        if (k != dropped) nd(kk++) = d(k);
      }
      d = nd;
    }
    const Admissibility step_adm = admissible(red.game, DiagonalScaling(d), tol);
    if (!step_adm.admissible ||
        std::find(step_adm.stable_vertices.begin(), step_adm.stable_vertices.end(), v) ==
            step_adm.stable_vertices.end()) {
      throw CertificateFailure("reduced game after removing strategy " + std::to_string(red.steps.back().removed + 1) +
                               " is not admissible at the transported vertex");
    }
  }

  CollapseResult out;
  out.steps = red.steps;
  out.final_game = red.game;
  out.final_equilibrium = red.q;
  out.certificate = DiagonalScaling(d);
  out.vertex = v;
  out.psi = red.psi();
  if (check_with_scaling(out.final_game, out.certificate, tol).kind != GameKind::conservative) {
    throw CertificateFailure("final game is not conservative under the transported scaling");
  }
  return out;
}

CollapseResult hamiltonian_collapse(const PolymatrixGame& game, double tol) {
  const EquilibriumSet eq = interior_equilibria(game);
  if (!eq.interior) throw std::invalid_argument("game has no interior equilibrium");
  return hamiltonian_collapse(game, eq.particular, tol);
}

}  // namespace polyrep

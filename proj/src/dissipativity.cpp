#include "polyrep/dissipativity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

namespace polyrep {

namespace {

double scale_of(const Matrix& m) { return std::max(1.0, spectral_norm(m)); }

// Threshold below which an entry is treated as zero: exact for integer
// matrices, relative otherwise.
double entry_eps(const Matrix& m, double tol) {
  if (m.size() == 0 || is_integer_valued(m)) return 0.0;
  return tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

Vector restricted_scaling(const PolymatrixGame& game, const VertexMatrix& vm,
                          const DiagonalScaling& d) {
  return restrict_to_index_set(vm, d.expand(game.type));
}

// Coordinate plus random-direction pattern search with step halving.
// Stops once f(x) <= target(x).
struct SearchResult {
  Vector x;
  double value;
  bool reached;
};

SearchResult pattern_search(const std::function<double(const Vector&)>& f,
                            const std::function<bool(const Vector&, double)>& done, Vector x,
                            std::mt19937_64& rng, int max_evals = 20000) {
  const Eigen::Index k = x.size();
  double fx = f(x);
  if (done(x, fx) || k == 0) return {x, fx, done(x, fx)};
  double step = 1.0;
  int evals = 1;
  std::normal_distribution<double> normal(0.0, 1.0);
  while (step > 1e-14 && evals < max_evals) {
    std::vector<Vector> dirs;
    for (Eigen::Index c = 0; c < k; ++c) {
      Vector e = Vector::Zero(k);
      e(c) = 1.0;
      dirs.push_back(e);
      dirs.push_back(-e);
    }
    for (Eigen::Index r = 0; r < 2 * k; ++r) {
      Vector u(k);
      for (Eigen::Index c = 0; c < k; ++c) u(c) = normal(rng);
      const double nu = u.norm();
      if (nu > 0) dirs.push_back(u / nu);
    }
    Vector best_x = x;
    double best_f = fx;
    for (const Vector& dir : dirs) {
      const Vector y = x + step * dir;
      const double fy = f(y);
      ++evals;
      if (fy < best_f) {
        best_f = fy;
        best_x = y;
      }
    }
    if (best_f < fx) {
      x = best_x;
      fx = best_f;
      if (done(x, fx)) return {x, fx, true};
      step = std::min(step * 2.0, 8.0);
    } else {
      step *= 0.5;
    }
  }
  return {x, fx, done(x, fx)};
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

std::string to_string(GameKind kind) {
  switch (kind) {
    case GameKind::conservative: return "conservative";
    case GameKind::dissipative: return "dissipative";
    case GameKind::indefinite: return "indefinite";
    case GameKind::no_formal_equilibrium: return "no_formal_equilibrium";
  }
  return "unknown";
}

Classification check_with_scaling(const PolymatrixGame& game, const DiagonalScaling& d, double tol) {
  if (d.p() != game.type.p()) {
    throw std::invalid_argument("scaling has " + std::to_string(d.p()) + " groups, game has " +
                                std::to_string(game.type.p()));
  }
  Classification out;
  out.scaling = d;
  if (!formal_equilibria(game).consistent) {
    out.kind = GameKind::no_formal_equilibrium;
    return out;
  }
  const VertexMatrix vm = vertex_matrix(game, enumerate_vertices(game.type).front());
  const Matrix m = vm.entries * restricted_scaling(game, vm, d).asDiagonal();
  if (m.size() == 0) {
    out.kind = GameKind::conservative;
    return out;
  }
  const double thr = tol * scale_of(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(m));
  const Vector& ev = es.eigenvalues();
  out.lambda_max = ev.maxCoeff();
  if (ev.cwiseAbs().maxCoeff() <= thr) {
    out.kind = GameKind::conservative;
  } else if (out.lambda_max <= thr) {
    out.kind = GameKind::dissipative;
  } else {
    out.kind = GameKind::indefinite;
    Eigen::Index top = 0;
    ev.maxCoeff(&top);
    out.witness = lift_to_tangent(game.type, vm, es.eigenvectors().col(top));
  }
  return out;
}

ScalingSearch search_scaling(const PolymatrixGame& game, double tol, std::uint64_t seed, int starts) {
  const int p = game.type.p();
  ScalingSearch result;
  result.best = DiagonalScaling::identity(p);
  const VertexMatrix vm = vertex_matrix(game, enumerate_vertices(game.type).front());
  if (vm.entries.size() == 0) {
    result.certificate = result.best;
    return result;
  }
  std::vector<int> group_of_pos;
  for (int i : vm.index_set) group_of_pos.push_back(game.type.group_of(i));

  auto scaled = [&](const Vector& y) {
    Vector dv(static_cast<Eigen::Index>(group_of_pos.size()));
    for (std::size_t r = 0; r < group_of_pos.size(); ++r) {
      const int a = group_of_pos[r];
      dv(r) = a == 0 ? 1.0 : std::exp(y(a - 1));
    }
    return Matrix(vm.entries * dv.asDiagonal());
  };
  auto objective = [&](const Vector& y) {
    for (Eigen::Index c = 0; c < y.size(); ++c) {
      if (!std::isfinite(y(c)) || std::abs(y(c)) > 600.0) return std::numeric_limits<double>::infinity();
    }
    return lambda_max(sym(scaled(y)));
  };
  auto done = [&](const Vector& y, double value) { return value <= tol * scale_of(scaled(y)); };
  auto to_scaling = [&](const Vector& y) {
    Vector d(p);
    d(0) = 1.0;
    for (int a = 1; a < p; ++a) d(a) = std::exp(y(a - 1));
    return DiagonalScaling(d);
  };

  std::vector<Vector> start_points;
  start_points.push_back(Vector::Zero(p - 1));
  // Seed from a per-index almost-skew scaling when it is constant on groups.
  if (auto ds = find_almost_skew_scaling(vm.entries, tol)) {
    std::vector<double> per_group(p, -1.0);
    bool consistent = true;
    for (std::size_t r = 0; r < group_of_pos.size(); ++r) {
      double& slot = per_group[group_of_pos[r]];
      const double v = (*ds)(static_cast<Eigen::Index>(r));
      if (slot < 0) {
        slot = v;
      } else if (std::abs(slot - v) > 1e-9 * std::max(slot, v)) {
        consistent = false;
      }
    }
    if (consistent) {
      const double base = per_group[0] > 0 ? per_group[0] : 1.0;
      Vector y(p - 1);
      for (int a = 1; a < p; ++a) y(a - 1) = per_group[a] > 0 ? std::log(per_group[a] / base) : 0.0;
      start_points.push_back(y);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  while (static_cast<int>(start_points.size()) < std::max(starts, 1)) {
    Vector y(p - 1);
    for (int c = 0; c < p - 1; ++c) y(c) = uni(rng);
    start_points.push_back(y);
  }

  double best_value = std::numeric_limits<double>::infinity();
  Vector best_y = Vector::Zero(p - 1);
  for (const Vector& start : start_points) {
    const SearchResult sr = pattern_search(objective, done, start, rng);
    if (sr.value < best_value) {
      best_value = sr.value;
      best_y = sr.x;
    }
    if (sr.reached) {
      result.certificate = to_scaling(sr.x);
      result.best = *result.certificate;
      result.best_lambda_max = sr.value;
      return result;
    }
  }
  result.best = to_scaling(best_y);
  result.best_lambda_max = best_value;
  return result;
}

std::optional<DiagonalScaling> find_scaling(const PolymatrixGame& game, double tol) {
  return search_scaling(game, tol).certificate;
}

Classification classify_game(const PolymatrixGame& game, double tol) {
  if (!formal_equilibria(game).consistent) {
    Classification out;
    out.kind = GameKind::no_formal_equilibrium;
    return out;
  }
  const ScalingSearch s = search_scaling(game, tol);
  Classification out = check_with_scaling(game, s.certificate ? *s.certificate : s.best, tol);
  if (!s.certificate && out.kind != GameKind::indefinite) {
    // Search and direct check disagree only at the tolerance boundary.
    out.kind = GameKind::indefinite;
  }
  return out;
}

SkewDecomposition skew_decomposition(const PolymatrixGame& game, const DiagonalScaling& d, double tol) {
  if (check_with_scaling(game, d, tol).kind != GameKind::conservative) {
    throw std::invalid_argument("skew decomposition requires a conservative certificate");
  }
  const int n = game.type.n();
  const int p = game.type.p();
  const Matrix b = game.payoff * d.expand(game.type).asDiagonal();
  const Matrix v = adapted_orthonormal_basis(game.type);
  const Matrix m = v.transpose() * b * v;
  // In the adapted basis, rows of H^perp carry equal-row blocks; the H x H
  // block is skew and the mixed blocks are mirrored.
  Matrix m0 = Matrix::Zero(n, n);
  for (int i = p; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j < p) {
        m0(i, j) = m(i, j);
        m0(j, i) = -m(i, j);
      } else {
        m0(i, j) = 0.5 * (m(i, j) - m(j, i));
      }
    }
  }
  Matrix skew = v * m0 * v.transpose();
  skew = 0.5 * (skew - skew.transpose());
  if (is_integer_valued(b) && (skew - skew.array().round().matrix()).cwiseAbs().maxCoeff() < 1e-9) {
    skew = skew.array().round().matrix();
  }
  SkewDecomposition out;
  out.skew = skew;
  out.equal_rows = b - skew;
  return out;
}

bool almost_skew_symmetric(const Matrix& m, double tol) {
  const Eigen::Index n = m.rows();
  if (n == 0) return true;
  const double scale = scale_of(m);
  if (lambda_max(sym(m)) > tol * scale) return false;
  const double eps = entry_eps(m, tol);
  std::vector<Eigen::Index> e_idx;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(m(i, i)) > eps) e_idx.push_back(i);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const bool touches_zero = std::abs(m(i, i)) <= eps || std::abs(m(j, j)) <= eps;
      if (touches_zero && std::abs(m(i, j) + m(j, i)) > eps) return false;
    }
  }
  if (e_idx.empty()) return true;
  const Matrix s = sym(m);
  Matrix se(e_idx.size(), e_idx.size());
  for (std::size_t r = 0; r < e_idx.size(); ++r) {
    for (std::size_t c = 0; c < e_idx.size(); ++c) se(r, c) = s(e_idx[r], e_idx[c]);
  }
  return lambda_max(se) < -tol * scale;
}

std::optional<Vector> find_almost_skew_scaling(const Matrix& m, double tol) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return Vector(0);
  const double eps = entry_eps(m, tol);
  auto zero_diag = [&](int i) { return std::abs(m(i, i)) <= eps; };

  // Constraint graph: d_j / d_i = -m_ji / m_ij on pairs touching a zero diagonal.
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!zero_diag(i) && !zero_diag(j)) continue;
      const bool zij = std::abs(m(i, j)) <= eps;
      const bool zji = std::abs(m(j, i)) <= eps;
      if (zij && zji) continue;
      if (zij != zji) return std::nullopt;
      if ((m(i, j) > 0) == (m(j, i) > 0)) return std::nullopt;
      const double ratio = -m(j, i) / m(i, j);
      adj[i].emplace_back(j, ratio);
      adj[j].emplace_back(i, 1.0 / ratio);
    }
  }
  Vector d = Vector::Zero(n);
  std::vector<int> component(n, -1);
  int components = 0;
  for (int root = 0; root < n; ++root) {
    if (component[root] >= 0) continue;
    d(root) = 1.0;
    component[root] = components;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (const auto& [j, ratio] : adj[i]) {
        const double want = ratio * d(i);
        if (component[j] < 0) {
          component[j] = components;
          d(j) = want;
          stack.push_back(j);
        } else if (std::abs(d(j) - want) > 1e-9 * std::max(d(j), want)) {
          return std::nullopt;
        }
      }
    }
    ++components;
  }
  if (almost_skew_symmetric(m * d.asDiagonal(), tol)) return d;

  // Free per-component factors only matter on the definite block; search them.
  std::vector<int> free_components;
  for (int i = 0; i < n; ++i) {
    if (!zero_diag(i) &&
        std::find(free_components.begin(), free_components.end(), component[i]) == free_components.end()) {
      free_components.push_back(component[i]);
    }
  }
  if (free_components.size() < 2) return std::nullopt;
  const Eigen::Index k = static_cast<Eigen::Index>(free_components.size()) - 1;
  auto scaled = [&](const Vector& y) {
    Vector dd = d;
    for (Eigen::Index c = 0; c < k; ++c) {
      const int comp = free_components[c + 1];
      for (int i = 0; i < n; ++i) {
        if (component[i] == comp) dd(i) = d(i) * std::exp(y(c));
      }
    }
    return dd;
  };
  auto objective = [&](const Vector& y) {
    if (y.cwiseAbs().maxCoeff() > 600.0) return std::numeric_limits<double>::infinity();
    const Matrix md = m * scaled(y).asDiagonal();
    return lambda_max(sym(md)) / scale_of(md);
  };
  auto done = [&](const Vector& y, double) { return almost_skew_symmetric(m * scaled(y).asDiagonal(), tol); };
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int s = 0; s < 8; ++s) {
    Vector start = Vector::Zero(k);
    if (s > 0) {
      for (Eigen::Index c = 0; c < k; ++c) start(c) = uni(rng);
    }
    const SearchResult sr = pattern_search(objective, done, start, rng, 4000);
    if (sr.reached) return scaled(sr.x);
  }
  return std::nullopt;
}

StableDissipativityReport stably_dissipative(const Matrix& m, double tol) {
  StableDissipativityReport rep;
  const int n = static_cast<int>(m.rows());
  const double eps = entry_eps(m, tol);
  UnionFind uf(n);
  rep.cycle_ok = true;
  for (int i = 0; i < n && rep.cycle_ok; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j)) <= eps && std::abs(m(j, i)) <= eps) continue;
      const bool strong = m(i, i) < -eps && m(j, j) < -eps;
      if (strong) continue;
      if (!uf.unite(i, j)) {
        rep.cycle_ok = false;
        rep.failures.push_back("cycle without strong link through edge {" + std::to_string(i + 1) + "," +
                               std::to_string(j + 1) + "}");
        break;
      }
    }
  }
  rep.scaling = find_almost_skew_scaling(m, tol);
  rep.skew_ok = rep.scaling.has_value();
  if (!rep.skew_ok) rep.failures.push_back("no diagonal scaling makes the matrix almost skew-symmetric");
  rep.stable = rep.cycle_ok && rep.skew_ok;
  return rep;
}

namespace {

Admissibility admissibility_from(const PolymatrixGame& game, Classification cls, double tol) {
  Admissibility out;
  out.classification = std::move(cls);
  for (const VertexLabel& v : enumerate_vertices(game.type)) {
    StableDissipativityReport rep = stably_dissipative(vertex_matrix(game, v).entries, tol);
    if (rep.stable) out.stable_vertices.push_back(v);
    out.reports.push_back(std::move(rep));
  }
  const GameKind k = out.classification.kind;
  out.admissible = (k == GameKind::dissipative || k == GameKind::conservative) && !out.stable_vertices.empty();
  return out;
}

}  // namespace

Admissibility admissible(const PolymatrixGame& game, double tol) {
  return admissibility_from(game, classify_game(game, tol), tol);
}

Admissibility admissible(const PolymatrixGame& game, const DiagonalScaling& d, double tol) {
  return admissibility_from(game, check_with_scaling(game, d, tol), tol);
}

bool kernel_duality(const Matrix& m, const Vector& d, double angle_tol, double tol) {
  if (d.size() != m.rows() || m.rows() != m.cols()) {
    throw std::invalid_argument("kernel_duality: dimension mismatch");
  }
  if ((d.array() <= 0).any()) throw std::invalid_argument("kernel_duality: scaling must be positive");
  const Matrix md = m * d.asDiagonal();
  if (lambda_max(sym(md)) > tol * scale_of(md)) return false;
  const Matrix ker = nullspace(m);
  const Matrix ker_t = d.asDiagonal() * nullspace(m.transpose());
  return max_principal_angle(ker, ker_t) <= angle_tol;
}

}  // namespace polyrep

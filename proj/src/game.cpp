#include "polyrep/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polyrep {

GameType::GameType(std::vector<int> groups) : groups_(std::move(groups)) {
  if (groups_.empty()) throw std::invalid_argument("game type needs at least one group");
  int offset = 0;
  for (std::size_t a = 0; a < groups_.size(); ++a) {
    if (groups_[a] < 1) {
      throw std::invalid_argument("group " + std::to_string(a + 1) + " has size " +
                                  std::to_string(groups_[a]) + " (must be >= 1)");
    }
    offsets_.push_back(offset);
    for (int k = 0; k < groups_[a]; ++k) group_of_.push_back(static_cast<int>(a));
    offset += groups_[a];
  }
}

std::string GameType::label() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t a = 0; a < groups_.size(); ++a) os << (a ? "," : "") << groups_[a];
  os << ')';
  return os.str();
}

DiagonalScaling::DiagonalScaling(Vector per_group) : d_(std::move(per_group)) {
  if (d_.size() == 0) throw std::invalid_argument("diagonal scaling is empty");
  for (Eigen::Index a = 0; a < d_.size(); ++a) {
    if (!(d_(a) > 0.0) || !std::isfinite(d_(a))) {
      throw std::invalid_argument("diagonal scaling entries must be positive and finite");
    }
  }
}

DiagonalScaling DiagonalScaling::identity(int groups) {
  return DiagonalScaling(Vector::Ones(groups));
}

Vector DiagonalScaling::expand(const GameType& type) const {
  if (type.p() != p()) throw std::invalid_argument("diagonal scaling does not match game type");
  Vector out(type.n());
  for (int i = 0; i < type.n(); ++i) out(i) = d_(type.group_of(i));
  return out;
}

PrismState::PrismState(const GameType& type, Vector x, double tol) : x_(std::move(x)) {
  if (!on_prism(type, x_, tol)) throw std::invalid_argument("state is not a point of the prism");
}

std::vector<std::string> validate_game(const PolymatrixGame& game) {
  std::vector<std::string> violations;
  const int n = game.type.n();
  if (game.payoff.rows() != n || game.payoff.cols() != n) {
    std::ostringstream os;
    os << "payoff matrix is " << game.payoff.rows() << "x" << game.payoff.cols() << " but type "
       << game.type.label() << " needs " << n << "x" << n;
    violations.push_back(os.str());
  }
  if (!game.payoff.allFinite()) violations.emplace_back("payoff matrix has non-finite entries");
  return violations;
}

PolymatrixGame make_game(GameType type, Matrix payoff) {
  PolymatrixGame game{std::move(type), std::move(payoff)};
  const auto violations = validate_game(game);
  if (!violations.empty()) throw std::invalid_argument(violations.front());
  return game;
}

PolymatrixGame zero_game(const GameType& type) {
  return PolymatrixGame{type, Matrix::Zero(type.n(), type.n())};
}

bool has_equal_row_blocks(const GameType& type, const Matrix& c, double tol) {
  const double eps = is_integer_valued(c) ? 0.0 : tol;
  for (int a = 0; a < type.p(); ++a) {
    const int first = type.group_begin(a);
    for (int i = first + 1; i < type.group_end(a); ++i) {
      if ((c.row(i) - c.row(first)).cwiseAbs().maxCoeff() > eps) return false;
    }
  }
  return true;
}

bool games_equivalent(const PolymatrixGame& a, const PolymatrixGame& b) {
  if (!(a.type == b.type)) throw std::invalid_argument("games of different type are never equivalent");
  return has_equal_row_blocks(a.type, a.payoff - b.payoff);
}

PolymatrixGame zero_row_representative(const PolymatrixGame& game, int strategy) {
  const GameType& t = game.type;
  if (strategy < 0 || strategy >= t.n()) throw std::out_of_range("strategy index out of range");
  PolymatrixGame out = game;
  const int g = t.group_of(strategy);
  const Eigen::RowVectorXd pivot = game.payoff.row(strategy);
  for (int i = t.group_begin(g); i < t.group_end(g); ++i) out.payoff.row(i) -= pivot;
  return out;
}

Vector vector_field(const PolymatrixGame& game, const Vector& x) {
  const GameType& t = game.type;
  const Vector payoff = game.payoff * x;
  Vector v(t.n());
  for (int a = 0; a < t.p(); ++a) {
    const int b = t.group_begin(a);
    const int e = t.group_end(a);
    const double mean = x.segment(b, e - b).dot(payoff.segment(b, e - b));
    for (int i = b; i < e; ++i) v(i) = x(i) * (payoff(i) - mean);
  }
  return v;
}

PolymatrixGame times_diagonal(const PolymatrixGame& game, const DiagonalScaling& d) {
  return PolymatrixGame{game.type, game.payoff * d.expand(game.type).asDiagonal()};
}

bool on_prism(const GameType& type, const Vector& x, double tol) {
  if (x.size() != type.n()) return false;
  for (int a = 0; a < type.p(); ++a) {
    double sum = 0.0;
    for (int i = type.group_begin(a); i < type.group_end(a); ++i) {
      if (!(x(i) >= 0.0)) return false;
      sum += x(i);
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

bool in_tangent_space(const GameType& type, const Vector& w, double tol) {
  if (w.size() != type.n()) return false;
  for (int a = 0; a < type.p(); ++a) {
    const int b = type.group_begin(a);
    if (std::abs(w.segment(b, type.group_size(a)).sum()) > tol) return false;
  }
  return true;
}

Vector barycenter(const GameType& type) {
  Vector x(type.n());
  for (int i = 0; i < type.n(); ++i) x(i) = 1.0 / type.group_size(type.group_of(i));
  return x;
}

Matrix adapted_orthonormal_basis(const GameType& type) {
  const int n = type.n();
  Matrix indicators = Matrix::Zero(n, type.p());
  for (int i = 0; i < n; ++i) {
    indicators(i, type.group_of(i)) = 1.0 / std::sqrt(double(type.group_size(type.group_of(i))));
  }
  Eigen::HouseholderQR<Matrix> qr(indicators);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  // Householder columns agree with the indicators up to sign; use the
  // indicators themselves so the first p columns are exact.
  q.leftCols(type.p()) = indicators;
  return q;
}

namespace {

// Rows: payoff differences (Aq)_i - (Aq)_first within each group, then one
// unit-sum row per group.
void equilibrium_system(const PolymatrixGame& game, Matrix& m, Vector& rhs) {
  const GameType& t = game.type;
  const int n = t.n();
  m = Matrix::Zero(n, n);
  rhs = Vector::Zero(n);
  int row = 0;
  for (int a = 0; a < t.p(); ++a) {
    const int first = t.group_begin(a);
    for (int i = first + 1; i < t.group_end(a); ++i) {
      m.row(row++) = game.payoff.row(i) - game.payoff.row(first);
    }
  }
  for (int a = 0; a < t.p(); ++a) {
    m.block(row, t.group_begin(a), 1, t.group_size(a)).setOnes();
    rhs(row++) = 1.0;
  }
}

double soft_min(const Vector& y, double beta, Vector* weights) {
  const double lo = y.minCoeff();
  const Vector e = (-beta * (y.array() - lo)).exp().matrix();
  const double s = e.sum();
  if (weights) *weights = e / s;
  return lo - std::log(s) / beta;
}

// Maximizes the smallest coordinate of q0 + N t by gradient ascent on a
// soft-min with increasing sharpness. Returns the best point seen.
Vector maximize_min_coordinate(const Vector& q0, const Matrix& basis) {
  Vector t = Vector::Zero(basis.cols());
  Vector best = q0;
  for (double beta : {10.0, 1e2, 1e3, 1e4, 1e5, 1e6}) {
    double step = 1.0;
    Vector w;
    for (int it = 0; it < 400; ++it) {
      const Vector y = q0 + basis * t;
      const double f = soft_min(y, beta, &w);
      if (y.minCoeff() > best.minCoeff()) best = y;
      const Vector grad = basis.transpose() * w;
      if (grad.norm() < 1e-15) break;
      bool moved = false;
      while (step > 1e-16) {
        const Vector trial = t + step * grad;
        if (soft_min(q0 + basis * trial, beta, nullptr) > f + 1e-4 * step * grad.squaredNorm()) {
          t = trial;
          step *= 2.0;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (best.minCoeff() > 1e-6) break;
  }
  return best;
}

}  // namespace

EquilibriumSet formal_equilibria(const PolymatrixGame& game) {
  Matrix m;
  Vector rhs;
  equilibrium_system(game, m, rhs);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankTol);
  EquilibriumSet out;
  const Vector q = svd.solve(rhs);
  const double scale = std::max(1.0, spectral_norm(m) * std::max(1.0, q.norm()));
  out.consistent = (m * q - rhs).norm() <= kSemidefTol * scale;
  if (!out.consistent) return out;
  out.particular = q;
  out.basis = nullspace(m);
  return out;
}

EquilibriumSet interior_equilibria(const PolymatrixGame& game) {
  EquilibriumSet out = formal_equilibria(game);
  if (!out.consistent) return out;
  constexpr double margin = 1e-12;
  if (out.particular.minCoeff() > margin) {
    out.interior = true;
    return out;
  }
  if (out.basis.cols() == 0) return out;
  const Vector best = maximize_min_coordinate(out.particular, out.basis);
  if (best.minCoeff() > margin) {
    out.interior = true;
    out.particular = best;
  }
  return out;
}

double max_speed(const PolymatrixGame& game, const Vector& x) {
  return vector_field(game, x).cwiseAbs().maxCoeff();
}

}  // namespace polyrep

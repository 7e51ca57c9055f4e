#include "polyrep/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polyrep {

namespace {

constexpr double kSuspendBelow = 1e-300;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-group softmax: the prism point whose log equals u up to a per-group
// constant. Faces carry u_i = -inf and map to exactly 0.
Vector group_softmax(const GameType& t, const Vector& u) {
  Vector x(u.size());
  for (int a = 0; a < t.p(); ++a) {
    const int b = t.group_begin(a), s = t.group_size(a);
    const double m = u.segment(b, s).maxCoeff();
    double sum = 0.0;
    for (int i = b; i < b + s; ++i) sum += (x(i) = std::exp(u(i) - m));
    x.segment(b, s) /= sum;
  }
  return x;
}

// Shift every group so that its largest log coordinate is 0.
void recenter(const GameType& t, Vector& u) {
  for (int a = 0; a < t.p(); ++a) {
    const int b = t.group_begin(a), s = t.group_size(a);
    u.segment(b, s).array() -= u.segment(b, s).maxCoeff();
  }
}

// Replicator flow in logarithmic coordinates:
// du_i/dt = (Ax)_i - sum_{k in group} x_k (Ax)_k with x = softmax(u).
Vector log_field(const PolymatrixGame& game, const Vector& u) {
  const GameType& t = game.type;
  const Vector x = group_softmax(t, u);
  const Vector f = game.payoff * x;
  Vector out = f;
  for (int a = 0; a < t.p(); ++a) {
    const int b = t.group_begin(a), s = t.group_size(a);
    out.segment(b, s).array() -= x.segment(b, s).dot(f.segment(b, s));
  }
  return out;
}

// Faces carry u_i = -inf; every other coordinate, and its slope, must stay
// finite.
bool admissible_log_state(const Vector& u, const Vector& slope) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) == -std::numeric_limits<double>::infinity()) continue;
    if (!std::isfinite(u(i)) || !std::isfinite(slope(i))) return false;
  }
  return true;
}

void record_monitors(const MonitorSpec& spec, const GameType& type, const Vector& x, Trajectory& traj) {
  const bool suspended = x.minCoeff() < kSuspendBelow;
  std::size_t m = 0;
  if (spec.lyapunov) {
    traj.monitor_values[m++].push_back(
        suspended ? kNaN : lyapunov_h(type, spec.lyapunov->first, spec.lyapunov->second, x));
  }
  for (const FirstIntegral& g : spec.integrals) traj.monitor_values[m++].push_back(suspended ? kNaN : g(x));
  for (const auto& [i, j] : spec.ratios) {
    traj.monitor_values[m++].push_back(x(j) < kSuspendBelow ? kNaN : x(i) / x(j));
  }
}

}  // namespace

double FirstIntegral::operator()(const Vector& x) const {
  double s = 0.0;
  for (std::size_t r = 0; r < index_set.size(); ++r) {
    if (b(static_cast<Eigen::Index>(r)) == 0.0) continue;
    s += b(static_cast<Eigen::Index>(r)) * std::log(x(index_set[r]) / x(partner[r]));
  }
  return s;
}

const std::vector<double>* Trajectory::monitor(const std::string& name) const {
  const auto it = std::find(monitor_names.begin(), monitor_names.end(), name);
  return it == monitor_names.end() ? nullptr : &monitor_values[it - monitor_names.begin()];
}

Trajectory integrate(const PolymatrixGame& game, const Vector& x0, double T, double dt, const MonitorSpec& monitors) {
  const GameType& t = game.type;
  if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("need dt > 0 and T >= 0");
  if (x0.size() != t.n() || !on_prism(t, x0)) throw std::invalid_argument("initial state is not on the prism");

  Trajectory traj;
  if (monitors.lyapunov) traj.monitor_names.push_back("h");
  for (std::size_t k = 0; k < monitors.integrals.size(); ++k) traj.monitor_names.push_back("g" + std::to_string(k + 1));
  for (const auto& [i, j] : monitors.ratios) {
    traj.monitor_names.push_back("x" + std::to_string(i + 1) + "/x" + std::to_string(j + 1));
  }
  traj.monitor_values.resize(traj.monitor_names.size());

  const long steps = std::lround(T / dt);
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  Vector u = x0.array().log().matrix();
  recenter(t, u);
  Vector x = group_softmax(t, u);
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  record_monitors(monitors, t, x, traj);
  for (long k = 1; k <= steps; ++k) {
    const Vector k1 = log_field(game, u);
    const Vector k2 = log_field(game, u + 0.5 * dt * k1);
    const Vector k3 = log_field(game, u + 0.5 * dt * k2);
    const Vector k4 = log_field(game, u + dt * k3);
    const Vector slope = (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    Vector next = u + dt * slope;
    if (!admissible_log_state(u, slope) || !admissible_log_state(next, slope)) {
      traj.error = true;
      traj.error_message = "state became non-finite at t = " + std::to_string(k * dt);
      break;
    }
    recenter(t, next);
    Vector xn = group_softmax(t, next);
    // The softmax normalizes each group; what remains is rounding.
    for (int a = 0; a < t.p(); ++a) {
      const int b = t.group_begin(a), s = t.group_size(a);
      const double sum = xn.segment(b, s).sum();
      traj.max_renormalization = std::max(traj.max_renormalization, std::abs(sum - 1.0));
    }
    u = next;
    x = xn;
    traj.times.push_back(k * dt);
    traj.states.push_back(x);
    record_monitors(monitors, t, x, traj);
  }
  return traj;
}

double lyapunov_h(const GameType& type, const Vector& q, const DiagonalScaling& d, const Vector& x) {
  if ((x.array() <= 0.0).any()) throw std::invalid_argument("h is undefined on the prism boundary");
  const Vector dd = d.expand(type);
  double h = 0.0;
  for (int i = 0; i < type.n(); ++i) h -= q(i) / dd(i) * std::log(x(i));
  return h;
}

double h_derivative(const PolymatrixGame& game, const Vector& q, const DiagonalScaling& d, const Vector& x) {
  const Vector w = x - q;
  const Vector inv = d.expand(game.type).cwiseInverse();
  return w.dot(inv.asDiagonal() * (game.payoff * w));
}

std::vector<FirstIntegral> first_integrals(const PolymatrixGame& game, const VertexLabel& v) {
  const VertexMatrix vm = vertex_matrix(game, v);
  std::vector<FirstIntegral> out;
  if (vm.index_set.empty()) return out;
  const Matrix ker = nullspace(vm.entries.transpose());
  std::vector<int> partner;
  for (int i : vm.index_set) partner.push_back(v.chosen[game.type.group_of(i)]);
  for (Eigen::Index c = 0; c < ker.cols(); ++c) {
    Vector b = ker.col(c);
    // Sign convention: first nonzero coefficient positive.
    for (Eigen::Index k = 0; k < b.size(); ++k) {
      if (std::abs(b(k)) > 1e-12) {
        if (b(k) < 0) b = -b;
        break;
      }
    }
    out.push_back(FirstIntegral{v, vm.index_set, partner, b});
  }
  return out;
}

std::vector<std::pair<double, double>> ratio_bounds(const Trajectory& traj,
                                                    const std::vector<std::pair<int, int>>& pairs) {
  std::vector<std::pair<double, double>> out;
  for (const auto& [i, j] : pairs) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Vector& x : traj.states) {
      const double r = x(i) / x(j);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.emplace_back(lo, hi);
  }
  return out;
}

double quotient_rule_check(const PolymatrixGame& game, const Vector& q, const VertexLabel& v, const Vector& x) {
  const VertexMatrix vm = vertex_matrix(game, v);
  const Vector vel = vector_field(game, x);
  const Vector u = restrict_to_index_set(vm, x - q);
  double worst = 0.0;
  for (std::size_t r = 0; r < vm.index_set.size(); ++r) {
    const int i = vm.index_set[r];
    const int j = v.chosen[game.type.group_of(i)];
    const double ratio = x(i) / x(j);
    const double lhs = (vel(i) * x(j) - x(i) * vel(j)) / (x(j) * x(j));
    const double rhs = ratio * vm.entries.row(static_cast<Eigen::Index>(r)).dot(u);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
  }
  return worst;
}

Vector random_interior(const GameType& type, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vector x(type.n());
  for (int a = 0; a < type.p(); ++a) {
    double s = 0.0;
    for (int i = type.group_begin(a); i < type.group_end(a); ++i) {
      x(i) = expo(rng) + 1e-12;
      s += x(i);
    }
    for (int i = type.group_begin(a); i < type.group_end(a); ++i) x(i) /= s;
  }
  return x;
}

AttractorReport attractor_probe(const PolymatrixGame& game, const Vector& q, const ReducedInformationSet& reduced,
                                int runs, double T, double dt, std::uint64_t seed) {
  AttractorReport rep;
  rep.runs = runs;
  rep.horizon = T;
  const auto& col = reduced.final_state.colours;
  for (std::size_t i = 0; i < col.size(); ++i) {
    if (col[i] == Colour::black) rep.black_deviation.emplace_back(static_cast<int>(i), 0.0);
    if (col[i] == Colour::plus) rep.plus_velocity.emplace_back(static_cast<int>(i), 0.0);
  }
  for (const auto& link : reduced.final_state.links) rep.link_drift.emplace_back(link, 0.0);

  std::mt19937_64 rng(seed);
  for (int run = 0; run < runs; ++run) {
    const Trajectory traj = integrate(game, random_interior(game.type, rng), T, dt);
    const Vector& xT = traj.states.back();
    const Vector vel = vector_field(game, xT);
    for (auto& [i, dev] : rep.black_deviation) dev = std::max(dev, std::abs(xT(i) - q(i)));
    for (auto& [i, sp] : rep.plus_velocity) sp = std::max(sp, std::abs(vel(i)));
    const std::size_t tail = traj.states.size() / 2;
    for (auto& [link, drift] : rep.link_drift) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t k = tail; k < traj.states.size(); ++k) {
        const double r = traj.states[k](link.first) / traj.states[k](link.second);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      drift = std::max(drift, hi - lo);
    }
  }
  return rep;
}

PolymatrixGame lv_to_replicator(const LVSystem& lv) {
  const Eigen::Index n = lv.a.rows();
  if (lv.a.cols() != n || lv.r.size() != n) throw std::invalid_argument("LV system dimensions disagree");
  Matrix m = Matrix::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = lv.a;
  m.topRightCorner(n, 1) = lv.r;
  return PolymatrixGame{GameType({static_cast<int>(n) + 1}), m};
}

Vector lv_field(const LVSystem& lv, const Vector& z) { return z.cwiseProduct(lv.r + lv.a * z); }

Vector hofbauer_map(const Vector& z) {
  const double s = 1.0 + z.sum();
  Vector x(z.size() + 1);
  x.head(z.size()) = z / s;
  x(z.size()) = 1.0 / s;
  return x;
}

Vector lv_pushforward(const LVSystem& lv, const Vector& z) {
  const Vector f = lv_field(lv, z);
  const double s = 1.0 + z.sum();
  const double fs = f.sum();
  Vector out(z.size() + 1);
  out.head(z.size()) = f / s - z * (fs / (s * s));
  out(z.size()) = -fs / (s * s);
  return out;
}

}  // namespace polyrep

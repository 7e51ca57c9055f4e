#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "polyrep/game.hpp"
#include "polyrep/reduction.hpp"
#include "polyrep/vertex_forms.hpp"

namespace polyrep {

/// g_b(x) = sum over V_v of b_i log(x_i / x_j), j the chosen strategy of
/// i's group at the vertex.
struct FirstIntegral {
  VertexLabel vertex;
  std::vector<int> index_set;
  std::vector<int> partner;
  Vector b;

  double operator()(const Vector& x) const;
};

/// What integrate() records alongside the states.
struct MonitorSpec {
  /// (q, D) for h(x) = -sum q_i / d_i log x_i.
  std::optional<std::pair<Vector, DiagonalScaling>> lyapunov;
  std::vector<FirstIntegral> integrals;
  std::vector<std::pair<int, int>> ratios;  // 0-based same-group pairs
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<std::string> monitor_names;
  /// monitor_values[m][k] is monitor m at times[k]; NaN while suspended.
  std::vector<std::vector<double>> monitor_values;
  /// Largest |group sum - 1| over the recorded states.
  double max_renormalization = 0.0;
  bool error = false;
  std::string error_message;

  /// Series by name, or nullptr.
  const std::vector<double>* monitor(const std::string& name) const;
};

struct LVSystem {
  Matrix a;
  Vector r;
};

struct AttractorReport {
  std::vector<std::pair<int, double>> black_deviation;  // max_runs |x_i(T) - q_i|
  std::vector<std::pair<int, double>> plus_velocity;    // max_runs |X_i(x(T))|
  std::vector<std::pair<std::pair<int, int>, double>> link_drift;  // tail max - min of x_i/x_j
  int runs = 0;
  double horizon = 0.0;
};

/// Fixed-step RK4 of the replicator flow in log coordinates u, with the
/// state recovered as a per-group softmax of u: group sums hold to rounding,
/// zero coordinates stay exactly zero, and log-ratio first integrals (linear
/// in u) are conserved by the scheme. max_renormalization reports the
/// largest group-sum deviation from 1. Stops early with error set when the
/// state becomes non-finite. Throws std::invalid_argument if x0 is not on the prism
/// or dt <= 0 or T < 0.
Trajectory integrate(const PolymatrixGame& game, const Vector& x0, double T, double dt = 0.01,
                     const MonitorSpec& monitors = {});

/// Throws std::invalid_argument if some x_i <= 0.
double lyapunov_h(const GameType& type, const Vector& q, const DiagonalScaling& d, const Vector& x);

/// Q_{D^-1 A}(x - q).
double h_derivative(const PolymatrixGame& game, const Vector& q, const DiagonalScaling& d, const Vector& x);

/// One integral per basis vector of Ker(A_v^T); empty when A_v^T has full
/// rank. Meaningful (conserved) for dissipative games.
std::vector<FirstIntegral> first_integrals(const PolymatrixGame& game, const VertexLabel& v);

/// Observed (min, max) of x_i / x_j over the trajectory.
std::vector<std::pair<double, double>> ratio_bounds(const Trajectory& traj,
                                                    const std::vector<std::pair<int, int>>& pairs);

/// Largest relative residual |lhs - rhs| / max(1, |lhs|, |rhs|) of the
/// quotient rule over all (i, j) in V_v.
double quotient_rule_check(const PolymatrixGame& game, const Vector& q, const VertexLabel& v, const Vector& x);

/// Independent product of flat Dirichlet draws, one per group.
Vector random_interior(const GameType& type, std::mt19937_64& rng);

/// Simulates `runs` seeded interior starts and measures the residuals that
/// the reduced information set predicts vanish; tail window [T/2, T].
AttractorReport attractor_probe(const PolymatrixGame& game, const Vector& q, const ReducedInformationSet& reduced,
                                int runs, double T, double dt = 0.01, std::uint64_t seed = 0);

/// Single-group game [[A, r], [0, 0]] of size n + 1.
PolymatrixGame lv_to_replicator(const LVSystem& lv);

Vector lv_field(const LVSystem& lv, const Vector& z);

/// (z, 1) / (1 + sum z).
Vector hofbauer_map(const Vector& z);

/// Derivative of hofbauer_map applied to the LV field at z.
Vector lv_pushforward(const LVSystem& lv, const Vector& z);

}  // namespace polyrep

#include "polyrep/vertex_forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polyrep {

std::string VertexLabel::label() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t a = 0; a < chosen.size(); ++a) os << (a ? "," : "") << chosen[a] + 1;
  os << ')';
  return os.str();
}

int VertexMatrix::position(int strategy) const {
  const auto it = std::lower_bound(index_set.begin(), index_set.end(), strategy);
  if (it == index_set.end() || *it != strategy) return -1;
  return static_cast<int>(it - index_set.begin());
}

std::vector<VertexLabel> enumerate_vertices(const GameType& type) {
  std::vector<VertexLabel> out;
  VertexLabel current;
  for (int a = 0; a < type.p(); ++a) current.chosen.push_back(type.group_begin(a));
  while (true) {
    out.push_back(current);
    // Odometer increment, last group fastest.
    int a = type.p() - 1;
    while (a >= 0) {
      if (++current.chosen[a] < type.group_end(a)) break;
      current.chosen[a] = type.group_begin(a);
      --a;
    }
    if (a < 0) break;
  }
  return out;
}

VertexMatrix vertex_matrix(const PolymatrixGame& game, const VertexLabel& v) {
  const GameType& t = game.type;
  if (static_cast<int>(v.chosen.size()) != t.p()) {
    throw std::invalid_argument("vertex label has wrong number of groups");
  }
  for (int a = 0; a < t.p(); ++a) {
    if (v.chosen[a] < t.group_begin(a) || v.chosen[a] >= t.group_end(a)) {
      throw std::invalid_argument("vertex label " + v.label() + " does not fit type " + t.label());
    }
  }
  VertexMatrix vm;
  vm.vertex = v;
  for (int i = 0; i < t.n(); ++i) {
    if (v.chosen[t.group_of(i)] != i) vm.index_set.push_back(i);
  }
  const int d = static_cast<int>(vm.index_set.size());
  const Matrix& a = game.payoff;
  vm.entries.resize(d, d);
  for (int r = 0; r < d; ++r) {
    const int i = vm.index_set[r];
    const int j = v.chosen[t.group_of(i)];
    for (int c = 0; c < d; ++c) {
      const int k = vm.index_set[c];
      const int l = v.chosen[t.group_of(k)];
      vm.entries(r, c) = a(i, k) + a(j, l) - a(i, l) - a(j, k);
    }
  }
  return vm;
}

double quadratic_form(const PolymatrixGame& game, const Vector& w) {
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  if (!in_tangent_space(game.type, w, 1e-10 * scale)) {
    throw std::invalid_argument("quadratic form argument is not tangent to the prism");
  }
  return w.dot(game.payoff * w);
}

Vector restrict_to_index_set(const VertexMatrix& vm, const Vector& x) {
  Vector out(static_cast<Eigen::Index>(vm.index_set.size()));
  for (std::size_t r = 0; r < vm.index_set.size(); ++r) out(r) = x(vm.index_set[r]);
  return out;
}

double quadratic_via_vertex(const PolymatrixGame& game, const VertexLabel& v, const Vector& x,
                            const Vector& q) {
  const VertexMatrix vm = vertex_matrix(game, v);
  const Vector u = restrict_to_index_set(vm, x - q);
  return u.dot(vm.entries * u);
}

StrategyGraph vertex_graph(const VertexMatrix& vm) {
  StrategyGraph g;
  g.vertices = vm.index_set;
  const int d = static_cast<int>(vm.index_set.size());
  g.neighbours.resize(d);
  g.diagonal.resize(d);
  const double eps = zero_threshold(vm.entries);
  for (int r = 0; r < d; ++r) {
    g.diagonal[r] = vm.entries(r, r);
    for (int c = r + 1; c < d; ++c) {
      if (std::abs(vm.entries(r, c)) > eps || std::abs(vm.entries(c, r)) > eps) {
        g.edges.emplace_back(vm.index_set[r], vm.index_set[c]);
        g.neighbours[r].push_back(c);
        g.neighbours[c].push_back(r);
      }
    }
  }
  for (auto& nb : g.neighbours) std::sort(nb.begin(), nb.end());
  return g;
}

bool diag_property_check(const PolymatrixGame& game, const DiagonalScaling& d, const VertexLabel& v) {
  const VertexMatrix lhs = vertex_matrix(times_diagonal(game, d), v);
  const VertexMatrix base = vertex_matrix(game, v);
  const Vector full = d.expand(game.type);
  const Vector dv = restrict_to_index_set(base, full);
  const Matrix rhs = base.entries * dv.asDiagonal();
  return max_abs(lhs.entries - rhs) <= kEqualTol * std::max(1.0, max_abs(rhs));
}

Vector lift_to_tangent(const GameType& type, const VertexMatrix& vm, const Vector& c) {
  Vector w = Vector::Zero(type.n());
  for (std::size_t r = 0; r < vm.index_set.size(); ++r) {
    const int i = vm.index_set[r];
    w(i) += c(r);
    w(vm.vertex.chosen[type.group_of(i)]) -= c(r);
  }
  return w;
}

}  // namespace polyrep

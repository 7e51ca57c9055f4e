#pragma once

#include <string>
#include <utility>
#include <vector>

#include "polyrep/game.hpp"

namespace polyrep {

/// Vertex e_{i_1} + ... + e_{i_p} of the prism, stored as the chosen
/// strategy of each group.
struct VertexLabel {
  std::vector<int> chosen;

  bool operator==(const VertexLabel&) const = default;
  auto operator<=>(const VertexLabel&) const = default;

  /// 1-based "(1,4)" form.
  std::string label() const;
};

/// Coefficients A_{(i,j),(k,l)} = a_ik + a_jl - a_il - a_jk on the
/// non-chosen strategies of a vertex. j and l are the chosen strategies of
/// the groups of i and k.
struct VertexMatrix {
  VertexLabel vertex;
  std::vector<int> index_set;  // sorted global strategy indices with v_i = 0
  Matrix entries;

  /// Position of a global strategy in index_set, or -1.
  int position(int strategy) const;
};

/// Undirected graph on index_set; edge {i,k} iff entry(i,k) or entry(k,i)
/// is nonzero. Diagonal entries are kept separately (not self-loops).
struct StrategyGraph {
  std::vector<int> vertices;                 // global strategy indices
  std::vector<std::pair<int, int>> edges;    // global indices, first < second
  std::vector<std::vector<int>> neighbours;  // by position in `vertices`
  std::vector<double> diagonal;              // by position in `vertices`
};

/// All prod(n_a) vertices in lexicographic order.
std::vector<VertexLabel> enumerate_vertices(const GameType& type);

/// Throws std::invalid_argument when the label does not fit the type.
VertexMatrix vertex_matrix(const PolymatrixGame& game, const VertexLabel& v);

/// w^T A w for w in H; throws std::invalid_argument when w is not in H.
double quadratic_form(const PolymatrixGame& game, const Vector& w);

/// sum over V_v x V_v of A_{(i,j),(k,l)} (x_i - q_i)(x_k - q_k).
double quadratic_via_vertex(const PolymatrixGame& game, const VertexLabel& v, const Vector& x,
                            const Vector& q);

StrategyGraph vertex_graph(const VertexMatrix& vm);

/// Whether (A D)_v equals A_v D_v entrywise (relative tolerance 1e-12).
bool diag_property_check(const PolymatrixGame& game, const DiagonalScaling& d, const VertexLabel& v);

/// Lift coordinates c over index_set to the vector sum c_i (e_i - e_{j(i)})
/// in H.
Vector lift_to_tangent(const GameType& type, const VertexMatrix& vm, const Vector& c);

/// Restriction of a vector to the coordinates of index_set.
Vector restrict_to_index_set(const VertexMatrix& vm, const Vector& x);

}  // namespace polyrep

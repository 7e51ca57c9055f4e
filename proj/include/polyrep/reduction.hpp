#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "polyrep/game.hpp"
#include "polyrep/vertex_forms.hpp"

namespace polyrep {

enum class Colour { white, black, plus };

/// "o", "*", "+" (ASCII) or the ∘ • ⊕ glyphs.
std::string symbol(Colour c, bool unicode = false);

/// One rule application: the rule, every vertex witnessing the same
/// inference (empty for group rules), and the strategies it coloured or
/// linked (global, 0-based).
struct TraceEntry {
  int rule = 0;
  std::vector<VertexLabel> vertices;
  std::vector<int> strategies;
};

struct InformationSet {
  std::vector<Colour> colours;
  std::set<std::pair<int, int>> links;  // same-group pairs, first < second
  std::vector<TraceEntry> trace;
};

enum class Verdict { all_black, black_plus, mixed };

std::string to_string(Verdict v);

struct ReducedInformationSet {
  InformationSet final_state;
  int fixpoint_rounds = 0;
  Verdict verdict = Verdict::mixed;
};

/// Order in which rules 2-6 are tried. The default puts every colouring
/// rule before the linking Rule 4, and tries Rule 4 candidates in smaller
/// groups first. A shuffle seed randomizes the order of candidate
/// instances within each rule (used for confluence diagnostics).
struct ScanOrder {
  std::vector<int> priority{2, 3, 5, 6, 4};
  bool small_groups_first = true;
  std::optional<std::uint64_t> shuffle_seed;

  /// Plain rule-id-major, lexicographic-minor order.
  static ScanOrder rule_id_major();
};

/// Precomputed graphs G(A_v) for all vertices, with the V* subset marked.
class ReductionContext {
 public:
  ReductionContext(const PolymatrixGame& game, std::vector<VertexLabel> stable_vertices);

  const GameType& type() const { return type_; }
  const std::vector<VertexLabel>& vertices() const { return vertices_; }
  const std::vector<VertexMatrix>& matrices() const { return matrices_; }
  const std::vector<StrategyGraph>& graphs() const { return graphs_; }
  bool is_stable(std::size_t vertex_index) const { return stable_[vertex_index]; }

 private:
  GameType type_;
  std::vector<VertexLabel> vertices_;
  std::vector<VertexMatrix> matrices_;
  std::vector<StrategyGraph> graphs_;
  std::vector<bool> stable_;
};

/// Rule 1 over V*. Throws std::invalid_argument if V* is empty.
InformationSet initialize(const ReductionContext& ctx);

/// First applicable instance of `rule` (2..6) under `order`, or nullopt.
/// Throws std::invalid_argument for other rule ids.
std::optional<InformationSet> apply_rule(const InformationSet& state, int rule,
                                         const ReductionContext& ctx, const ScanOrder& order = {});

ReducedInformationSet run_to_fixpoint(const ReductionContext& ctx, const ScanOrder& order = {});

/// Computes V* via admissible(); throws std::invalid_argument when the game
/// is not admissible.
ReducedInformationSet run_to_fixpoint(const PolymatrixGame& game, const ScanOrder& order = {},
                                      double tol = kSemidefTol);

Verdict verdict_of(const std::vector<Colour>& colours);

/// Consecutive applications of the same rule, merged the way a step table
/// presents them.
std::vector<TraceEntry> table_steps(const std::vector<TraceEntry>& trace);

/// Human-readable consequence of the reduced information set for the
/// attractor around the interior equilibrium q.
std::string classify_attractor(const ReducedInformationSet& r, const Vector& q);

}  // namespace polyrep

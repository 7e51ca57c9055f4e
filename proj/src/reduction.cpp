#include "polyrep/reduction.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "polyrep/dissipativity.hpp"
#include "polyrep/game_io.hpp"

namespace polyrep {

namespace {

bool settled(Colour c) { return c != Colour::white; }

// A candidate inference before witnesses are merged.
struct Candidate {
  int rule;
  std::size_t vertex;  // index into ctx.vertices(), or npos for group rules
  std::vector<int> strategies;
  Colour colour = Colour::white;  // target colour (rules 2,3,5,6)
  int group = 0;                  // for ordering rule 4 / group rules
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::pair<int, int> ordered(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

// Rules 2 and 3 at one vertex: i settled, every neighbour of i other than
// j is black (rule 2) or settled (rule 3) -> colour j.
void neighbour_rule(const InformationSet& s, const ReductionContext& ctx, std::size_t vi, int rule,
                    std::vector<Candidate>& out) {
  const StrategyGraph& g = ctx.graphs()[vi];
  const auto& col = s.colours;
  for (std::size_t pi = 0; pi < g.vertices.size(); ++pi) {
    const int i = g.vertices[pi];
    if (!settled(col[i])) continue;
    for (int pj : g.neighbours[pi]) {
      const int j = g.vertices[pj];
      const bool changes = rule == 2 ? col[j] != Colour::black : col[j] == Colour::white;
      if (!changes) continue;
      bool ok = true;
      for (int pk : g.neighbours[pi]) {
        if (pk == pj) continue;
        const Colour c = col[g.vertices[pk]];
        if (rule == 2 ? c != Colour::black : !settled(c)) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back({rule, vi, {j}, rule == 2 ? Colour::black : Colour::plus, ctx.type().group_of(j)});
    }
  }
}

// Rule 4 at one vertex: white i whose neighbours are all settled is related
// to the chosen strategy of its group.
void link_rule(const InformationSet& s, const ReductionContext& ctx, std::size_t vi,
               std::vector<Candidate>& out) {
  const StrategyGraph& g = ctx.graphs()[vi];
  const VertexLabel& v = ctx.vertices()[vi];
  for (std::size_t pi = 0; pi < g.vertices.size(); ++pi) {
    const int i = g.vertices[pi];
    if (s.colours[i] != Colour::white) continue;
    const bool all_settled = std::all_of(g.neighbours[pi].begin(), g.neighbours[pi].end(),
                                         [&](int pk) { return settled(s.colours[g.vertices[pk]]); });
    if (!all_settled) continue;
    const int group = ctx.type().group_of(i);
    const auto link = ordered(i, v.chosen[group]);
    if (s.links.count(link)) continue;
    out.push_back({4, vi, {link.first, link.second}, Colour::white, group});
  }
}

void group_rules(const InformationSet& s, const ReductionContext& ctx, int rule, std::vector<Candidate>& out) {
  const GameType& t = ctx.type();
  for (int a = 0; a < t.p(); ++a) {
    std::vector<int> white, plus;
    int black = 0;
    for (int i = t.group_begin(a); i < t.group_end(a); ++i) {
      switch (s.colours[i]) {
        case Colour::white: white.push_back(i); break;
        case Colour::plus: plus.push_back(i); break;
        case Colour::black: ++black; break;
      }
    }
    if (rule == 5) {
      const int size = t.group_size(a);
      if (black == size - 1 && white.size() + plus.size() == 1) {
        const int i = white.empty() ? plus.front() : white.front();
        out.push_back({5, npos, {i}, Colour::black, a});
      } else if (white.size() == 1) {
        out.push_back({5, npos, {white.front()}, Colour::plus, a});
      }
    } else if (rule == 6 && !white.empty()) {
      // White strategies must form one component of the link graph.
      std::vector<int> comp(white.size());
      std::iota(comp.begin(), comp.end(), 0);
      auto find = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
      };
      for (const auto& [u, w] : s.links) {
        const auto iu = std::find(white.begin(), white.end(), u);
        const auto iw = std::find(white.begin(), white.end(), w);
        if (iu == white.end() || iw == white.end()) continue;
        comp[find(static_cast<int>(iu - white.begin()))] = find(static_cast<int>(iw - white.begin()));
      }
      const int root = find(0);
      bool connected = true;
      for (std::size_t k = 1; k < white.size(); ++k) connected = connected && find(static_cast<int>(k)) == root;
      if (connected) out.push_back({6, npos, white, Colour::plus, a});
    }
  }
}

std::vector<Candidate> candidates(const InformationSet& s, const ReductionContext& ctx, int rule) {
  std::vector<Candidate> out;
  if (rule == 2 || rule == 3) {
    for (std::size_t vi = 0; vi < ctx.vertices().size(); ++vi) {
      if (ctx.is_stable(vi)) neighbour_rule(s, ctx, vi, rule, out);
    }
  } else if (rule == 4) {
    for (std::size_t vi = 0; vi < ctx.vertices().size(); ++vi) link_rule(s, ctx, vi, out);
  } else if (rule == 5 || rule == 6) {
    group_rules(s, ctx, rule, out);
  } else {
    throw std::invalid_argument("rule id must be in 2..6, got " + std::to_string(rule));
  }
  return out;
}

bool same_inference(const Candidate& a, const Candidate& b) {
  return a.rule == b.rule && a.strategies == b.strategies && a.colour == b.colour;
}

}  // namespace

std::string symbol(Colour c, bool unicode) {
  switch (c) {
    case Colour::white: return unicode ? "∘" : "o";
    case Colour::black: return unicode ? "•" : "*";
    case Colour::plus: return unicode ? "⊕" : "+";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::all_black: return "all_black";
    case Verdict::black_plus: return "black_plus";
    case Verdict::mixed: return "mixed";
  }
  return "unknown";
}

ScanOrder ScanOrder::rule_id_major() {
  ScanOrder o;
  o.priority = {2, 3, 4, 5, 6};
  o.small_groups_first = false;
  return o;
}

ReductionContext::ReductionContext(const PolymatrixGame& game, std::vector<VertexLabel> stable_vertices)
    : type_(game.type), vertices_(enumerate_vertices(game.type)) {
  std::sort(stable_vertices.begin(), stable_vertices.end());
  for (const VertexLabel& v : vertices_) {
    matrices_.push_back(vertex_matrix(game, v));
    graphs_.push_back(vertex_graph(matrices_.back()));
    stable_.push_back(std::binary_search(stable_vertices.begin(), stable_vertices.end(), v));
  }
}

InformationSet initialize(const ReductionContext& ctx) {
  InformationSet s;
  s.colours.assign(ctx.type().n(), Colour::white);
  TraceEntry entry{1, {}, {}};
  bool any_stable = false;
  for (std::size_t vi = 0; vi < ctx.vertices().size(); ++vi) {
    if (!ctx.is_stable(vi)) continue;
    any_stable = true;
    const StrategyGraph& g = ctx.graphs()[vi];
    bool witnessed = false;
    for (std::size_t pi = 0; pi < g.vertices.size(); ++pi) {
      if (g.diagonal[pi] < 0) {
        s.colours[g.vertices[pi]] = Colour::black;
        witnessed = true;
        if (std::find(entry.strategies.begin(), entry.strategies.end(), g.vertices[pi]) == entry.strategies.end()) {
          entry.strategies.push_back(g.vertices[pi]);
        }
      }
    }
    if (witnessed) entry.vertices.push_back(ctx.vertices()[vi]);
  }
  if (!any_stable) throw std::invalid_argument("reduction needs a nonempty set of stable vertices");
  std::sort(entry.strategies.begin(), entry.strategies.end());
  if (!entry.strategies.empty()) s.trace.push_back(entry);
  return s;
}

std::optional<InformationSet> apply_rule(const InformationSet& state, int rule, const ReductionContext& ctx,
                                         const ScanOrder& order) {
  std::vector<Candidate> cands = candidates(state, ctx, rule);
  if (cands.empty()) return std::nullopt;
  if (order.shuffle_seed) {
    std::mt19937_64 rng(*order.shuffle_seed + 7919u * static_cast<std::uint64_t>(rule) + state.trace.size());
    std::shuffle(cands.begin(), cands.end(), rng);
  } else if (rule == 4 && order.small_groups_first) {
    std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
      const int sa = ctx.type().group_size(a.group), sb = ctx.type().group_size(b.group);
      return sa != sb ? sa < sb : a.group < b.group;
    });
  }
  const Candidate& pick = cands.front();

  InformationSet next = state;
  TraceEntry entry{rule, {}, pick.strategies};
  for (const Candidate& c : cands) {
    if (c.vertex != npos && same_inference(c, pick)) {
      const VertexLabel& v = ctx.vertices()[c.vertex];
      if (std::find(entry.vertices.begin(), entry.vertices.end(), v) == entry.vertices.end()) {
        entry.vertices.push_back(v);
      }
    }
  }
  std::sort(entry.vertices.begin(), entry.vertices.end());
  if (rule == 4) {
    next.links.insert({pick.strategies[0], pick.strategies[1]});
  } else {
    for (int j : pick.strategies) next.colours[j] = pick.colour;
  }
  next.trace.push_back(std::move(entry));
  return next;
}

Verdict verdict_of(const std::vector<Colour>& colours) {
  if (std::all_of(colours.begin(), colours.end(), [](Colour c) { return c == Colour::black; })) {
    return Verdict::all_black;
  }
  if (std::all_of(colours.begin(), colours.end(), settled)) return Verdict::black_plus;
  return Verdict::mixed;
}

ReducedInformationSet run_to_fixpoint(const ReductionContext& ctx, const ScanOrder& order) {
  ReducedInformationSet r;
  InformationSet s = initialize(ctx);
  const int n = ctx.type().n();
  const int max_rounds = 2 * n + n * n + 1;
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (int rule : order.priority) {
      if (auto next = apply_rule(s, rule, ctx, order)) {
        s = std::move(*next);
        ++r.fixpoint_rounds;
        progressed = true;
        break;
      }
    }
    if (r.fixpoint_rounds > max_rounds) throw std::logic_error("reduction exceeded its monotone step bound");
  }
  r.verdict = verdict_of(s.colours);
  r.final_state = std::move(s);
  return r;
}

ReducedInformationSet run_to_fixpoint(const PolymatrixGame& game, const ScanOrder& order, double tol) {
  const Admissibility adm = admissible(game, tol);
  if (!adm.admissible) throw std::invalid_argument("reduction requires an admissible game");
  return run_to_fixpoint(ReductionContext(game, adm.stable_vertices), order);
}

std::vector<TraceEntry> table_steps(const std::vector<TraceEntry>& trace) {
  std::vector<TraceEntry> out;
  for (const TraceEntry& e : trace) {
    if (!out.empty() && out.back().rule == e.rule) {
      TraceEntry& last = out.back();
      for (const VertexLabel& v : e.vertices) {
        if (std::find(last.vertices.begin(), last.vertices.end(), v) == last.vertices.end()) last.vertices.push_back(v);
      }
      for (int i : e.strategies) {
        if (std::find(last.strategies.begin(), last.strategies.end(), i) == last.strategies.end()) {
          last.strategies.push_back(i);
        }
      }
      std::sort(last.vertices.begin(), last.vertices.end());
      std::sort(last.strategies.begin(), last.strategies.end());
    } else {
      out.push_back(e);
    }
  }
  return out;
}

std::string classify_attractor(const ReducedInformationSet& r, const Vector& q) {
  std::ostringstream os;
  const auto& col = r.final_state.colours;
  switch (r.verdict) {
    case Verdict::all_black:
      os << "q is the unique globally attractive equilibrium";
      break;
    case Verdict::black_plus:
      os << "invariant foliation with a unique globally attractive equilibrium in each leaf";
      break;
    case Verdict::mixed: {
      os << "attractor contained in {";
      bool first = true;
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (col[i] != Colour::black) continue;
        os << (first ? "" : ", ") << "x" << i + 1 << " = " << format_number(q(static_cast<Eigen::Index>(i)));
        first = false;
      }
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (col[i] != Colour::plus) continue;
        os << (first ? "" : ", ") << "dx" << i + 1 << "/dt = 0";
        first = false;
      }
      os << "}";
      break;
    }
  }
  return os.str();
}

}  // namespace polyrep

#include "polyrep/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "polyrep/collapse.hpp"
#include "polyrep/dissipativity.hpp"
#include "polyrep/dynamics.hpp"
#include "polyrep/game_io.hpp"
#include "polyrep/reduction.hpp"
#include "polyrep/vertex_forms.hpp"

namespace polyrep::cli {

namespace {

using json = nlohmann::ordered_json;

std::string one_based(int i) { return std::to_string(i + 1); }

std::vector<int> one_based(const std::vector<int>& v) {
  std::vector<int> out;
  for (int i : v) out.push_back(i + 1);
  return out;
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json(Vector(m.row(r).transpose())));
  return rows;
}

// Text reports round to 12 significant digits; JSON keeps full precision.
std::string display(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return format_number(r);
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string join(const Vector& v, const std::string& sep = ", ") {
  std::string s;
  for (Eigen::Index k = 0; k < v.size(); ++k) s += (k ? sep : "") + display(v(k));
  return s;
}

void print_matrix(std::ostream& out, const Matrix& m, const std::string& indent = "  ") {
  std::vector<std::vector<std::string>> cells(m.rows());
  std::size_t width = 1;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      cells[r].push_back(display(m(r, c)));
      width = std::max(width, cells[r].back().size());
    }
  }
  for (const auto& row : cells) {
    out << indent << "[";
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? " " : "") << std::setw(static_cast<int>(width)) << row[c];
    out << "]\n";
  }
}

std::string label_set(const std::vector<VertexLabel>& vs) {
  std::string s = "{ ";
  for (std::size_t k = 0; k < vs.size(); ++k) s += (k ? "," : "") + vs[k].label();
  return s + (vs.empty() ? "}" : " }");
}

json label_json(const VertexLabel& v) { return one_based(v.chosen); }

// Index of v in the lexicographic enumeration, as "v<k>".
std::string vertex_name(const GameType& t, const VertexLabel& v) {
  const auto all = enumerate_vertices(t);
  const auto it = std::find(all.begin(), all.end(), v);
  return "v" + std::to_string(it - all.begin() + 1);
}

int classification_exit(const Admissibility& adm) {
  if (adm.admissible) return kOk;
  const GameKind k = adm.classification.kind;
  return k == GameKind::dissipative || k == GameKind::conservative ? kNotAdmissible : kNotDissipative;
}

std::string kind_summary(const Admissibility& adm) {
  std::string s = to_string(adm.classification.kind);
  if (adm.classification.kind == GameKind::indefinite) s += " (no scaling certificate found)";
  return s + ", " + (adm.admissible ? "admissible" : "not admissible") + ", V*=" + label_set(adm.stable_vertices);
}

int cmd_check(const RunConfig& cfg, const PolymatrixGame& game, std::ostream& out) {
  const Admissibility adm = admissible(game, cfg.tol);
  const auto vertices = enumerate_vertices(game.type);
  const Classification& cls = adm.classification;
  if (cfg.format == "json") {
    json j;
    j["type"] = game.type.groups();
    j["kind"] = to_string(cls.kind);
    j["certificate"] = cls.kind == GameKind::conservative || cls.kind == GameKind::dissipative
                           ? to_json(cls.scaling->per_group())
                           : json(nullptr);
    j["lambda_max"] = cls.lambda_max;
    j["witness"] = cls.witness ? to_json(*cls.witness) : json(nullptr);
    j["admissible"] = adm.admissible;
    j["stable_vertices"] = json::array();
    for (const auto& v : adm.stable_vertices) j["stable_vertices"].push_back(label_json(v));
    j["vertices"] = json::array();
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      const auto& rep = adm.reports[k];
      j["vertices"].push_back({{"vertex", label_json(vertices[k])},
                               {"stable", rep.stable},
                               {"cycle_ok", rep.cycle_ok},
                               {"skew_ok", rep.skew_ok},
                               {"scaling", rep.scaling ? to_json(*rep.scaling) : json(nullptr)},
                               {"failures", rep.failures}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << "type: " << game.type.label() << "\n";
    out << "kind: " << to_string(cls.kind) << "\n";
    if (cls.kind == GameKind::conservative || cls.kind == GameKind::dissipative) {
      out << "certificate D: (" << join(cls.scaling->per_group()) << ")\n";
    } else if (cls.kind == GameKind::indefinite) {
      out << "no scaling certificate found (not a proof of non-dissipativity)\n";
      if (cls.witness) out << "witness w in H with Q_AD(w) > 0: (" << join(*cls.witness) << ")\n";
    }
    out << "vertices:\n";
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      const auto& rep = adm.reports[k];
      out << "  " << vertex_name(game.type, vertices[k]) << " " << vertices[k].label() << ": "
          << (rep.stable ? "stable" : "not stable") << " (cycles " << (rep.cycle_ok ? "ok" : "fail") << ", skew "
          << (rep.skew_ok ? "ok" : "fail") << ")";
      if (rep.scaling) out << " scaling (" << join(*rep.scaling) << ")";
      out << "\n";
      for (const auto& f : rep.failures) out << "      - " << f << "\n";
    }
    out << kind_summary(adm) << "\n";
  }
  return classification_exit(adm);
}

int cmd_vertices(const RunConfig& cfg, const PolymatrixGame& game, std::ostream& out) {
  json arr = json::array();
  for (const VertexLabel& v : enumerate_vertices(game.type)) {
    const VertexMatrix vm = vertex_matrix(game, v);
    const StrategyGraph g = vertex_graph(vm);
    if (cfg.format == "json") {
      json edges = json::array();
      for (const auto& [a, b] : g.edges) edges.push_back({a + 1, b + 1});
      arr.push_back({{"vertex", label_json(v)},
                     {"name", vertex_name(game.type, v)},
                     {"index_set", one_based(vm.index_set)},
                     {"matrix", to_json(vm.entries)},
                     {"edges", edges}});
    } else {
      out << "vertex " << vertex_name(game.type, v) << " = " << v.label() << "\n";
      out << "  index set: {";
      for (std::size_t k = 0; k < vm.index_set.size(); ++k) out << (k ? "," : "") << vm.index_set[k] + 1;
      out << "}\n  matrix:\n";
      print_matrix(out, vm.entries, "    ");
      out << "  edges:";
      for (const auto& [a, b] : g.edges) out << " {" << a + 1 << "," << b + 1 << "}";
      out << (g.edges.empty() ? " none\n" : "\n");
    }
  }
  if (cfg.format == "json") out << arr.dump(2) << "\n";
  return kOk;
}

int cmd_reduce(const RunConfig& cfg, const PolymatrixGame& game, std::ostream& out, std::ostream& err) {
  const Admissibility adm = admissible(game, cfg.tol);
  if (!adm.admissible) {
    err << "reduction needs an admissible game: " << kind_summary(adm) << "\n";
    return classification_exit(adm);
  }
  const ReducedInformationSet r = run_to_fixpoint(ReductionContext(game, adm.stable_vertices));
  const auto steps = table_steps(r.final_state.trace);
  const EquilibriumSet eq = interior_equilibria(game);
  const std::string statement = eq.interior ? classify_attractor(r, eq.particular) : "no interior equilibrium";
  auto vertex_list = [&](const TraceEntry& e) {
    std::string s;
    for (std::size_t k = 0; k < e.vertices.size(); ++k) s += (k ? "," : "") + vertex_name(game.type, e.vertices[k]);
    return s.empty() ? std::string("-") : s;
  };
  if (cfg.format == "json") {
    json j;
    auto entry_json = [&](const TraceEntry& e) {
      json vs = json::array();
      for (const auto& v : e.vertices) vs.push_back(label_json(v));
      return json{{"rule", e.rule}, {"vertices", vs}, {"strategies", one_based(e.strategies)}};
    };
    j["steps"] = json::array();
    for (const auto& e : steps) j["steps"].push_back(entry_json(e));
    j["trace"] = json::array();
    for (const auto& e : r.final_state.trace) j["trace"].push_back(entry_json(e));
    j["colours"] = json::array();
    for (Colour c : r.final_state.colours) j["colours"].push_back(symbol(c, true));
    j["links"] = json::array();
    for (const auto& [a, b] : r.final_state.links) j["links"].push_back({a + 1, b + 1});
    j["verdict"] = to_string(r.verdict);
    j["attractor"] = statement;
    out << j.dump(2) << "\n";
  } else {
    out << "Step  Rule  Vertex          Strategy\n";
    for (std::size_t k = 0; k < steps.size(); ++k) {
      std::string strategies;
      for (std::size_t s = 0; s < steps[k].strategies.size(); ++s) {
        strategies += (s ? ", " : "") + one_based(steps[k].strategies[s]);
      }
      out << std::left << std::setw(6) << k + 1 << std::setw(6) << steps[k].rule << std::setw(16) << vertex_list(steps[k])
          << strategies << "\n";
    }
    out << std::right << "colours:";
    for (std::size_t i = 0; i < r.final_state.colours.size(); ++i) {
      out << " " << i + 1 << ":" << symbol(r.final_state.colours[i], true);
    }
    out << "\nlinks:";
    for (const auto& [a, b] : r.final_state.links) out << " {" << a + 1 << "," << b + 1 << "}";
    out << (r.final_state.links.empty() ? " none\n" : "\n");
    out << "verdict: " << to_string(r.verdict) << "\n";
    out << "attractor: " << statement << "\n";
  }
  return kOk;
}

int cmd_collapse(const RunConfig& cfg, const PolymatrixGame& game, std::ostream& out, std::ostream& err) {
  const Admissibility adm = admissible(game, cfg.tol);
  if (!adm.admissible) {
    err << "collapse needs an admissible game: " << kind_summary(adm) << "\n";
    return classification_exit(adm);
  }
  const EquilibriumSet eq = interior_equilibria(game);
  if (!eq.interior) {
    err << "collapse needs an interior equilibrium\n";
    return kNotAdmissible;
  }
  CollapseResult res;
  try {
    res = hamiltonian_collapse(game, eq.particular, cfg.tol);
  } catch (const CertificateFailure& e) {
    err << "certificate failure: " << e.what() << "\n";
    return kCertificateFailure;
  }
  const bool trivial = games_equivalent(res.final_game, zero_game(res.final_game.type));
  if (!cfg.emit_game_path.empty()) write_game_file(cfg.emit_game_path, res.final_game);
  if (cfg.format == "json") {
    json j;
    j["steps"] = json::array();
    for (const auto& s : res.steps) {
      j["steps"].push_back({{"removed", s.removed + 1},
                            {"group", s.group + 1},
                            {"q_ell", s.q_ell},
                            {"type_before", s.before.groups()},
                            {"type_after", s.after.groups()},
                            {"scaling_factor", s.scaling_factor},
                            {"group_dropped", s.group_dropped}});
    }
    j["final_type"] = res.final_game.type.groups();
    j["final_game"] = to_json(res.final_game.payoff);
    j["final_equilibrium"] = to_json(res.final_equilibrium);
    j["certificate"] = to_json(res.certificate.per_group());
    j["vertex"] = label_json(res.vertex);
    j["kept_strategies"] = one_based(res.psi.kept);
    j["conservative"] = true;
    j["equivalent_to_trivial_game"] = trivial;
    out << j.dump(2) << "\n";
  } else {
    for (std::size_t k = 0; k < res.steps.size(); ++k) {
      const auto& s = res.steps[k];
      out << "step " << k + 1 << ": remove strategy " << s.removed + 1 << " (group " << s.group + 1
          << ", q = " << display(s.q_ell) << "), type " << s.before.label() << " -> " << s.after.label()
          << ", scale group by " << display(s.scaling_factor)
          << (s.group_dropped ? ", pinned group removed" : "") << "\n";
    }
    if (res.steps.empty()) out << "no reduction needed (already conservative at " << res.vertex.label() << ")\n";
    out << "final type: " << res.final_game.type.label() << "\n";
    out << "final payoff matrix:\n";
    print_matrix(out, res.final_game.payoff);
    out << "final equilibrium: (" << join(res.final_equilibrium) << ")\n";
    out << "certificate D: (" << join(res.certificate.per_group()) << "), conservative\n";
    if (trivial) out << "equivalent to the trivial game " << res.final_game.type.label() << ", 0\n";
  }
  return kOk;
}

Vector initial_state(const RunConfig& cfg, const GameType& type) {
  std::string spec = cfg.x0.empty() ? "random:" + std::to_string(cfg.seed) : cfg.x0;
  if (spec.rfind("random:", 0) == 0) {
    std::uint64_t s = 0;
    try {
      s = std::stoull(spec.substr(7));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad seed in --x0 '" + spec + "'");
    }
    std::mt19937_64 rng(s);
    return random_interior(type, rng);
  }
  Vector x = parse_number_list(spec);
  if (x.size() != type.n() || !on_prism(type, x)) throw std::invalid_argument("--x0 is not a point of the prism");
  return x;
}

int cmd_simulate(const RunConfig& cfg, const PolymatrixGame& game, std::ostream& out, std::ostream& err) {
  const Vector x0 = initial_state(cfg, game.type);
  MonitorSpec spec;
  for (const std::string& m : cfg.monitors) {
    if (m == "h") {
      const EquilibriumSet eq = interior_equilibria(game);
      const auto d = find_scaling(game, cfg.tol);
      if (!eq.interior || !d) {
        err << "monitor h needs an interior equilibrium and a dissipativity certificate\n";
        return kNotDissipative;
      }
      spec.lyapunov = std::make_pair(eq.particular, *d);
    } else if (m == "gb") {
      const Admissibility adm = admissible(game, cfg.tol);
      const VertexLabel v =
          adm.stable_vertices.empty() ? enumerate_vertices(game.type).front() : adm.stable_vertices.front();
      spec.integrals = first_integrals(game, v);
    } else if (m == "ratios") {
      for (int a = 0; a < game.type.p(); ++a) {
        for (int i = game.type.group_begin(a); i < game.type.group_end(a); ++i) {
          for (int j = i + 1; j < game.type.group_end(a); ++j) spec.ratios.emplace_back(i, j);
        }
      }
    } else {
      err << "unknown monitor '" << m << "' (expected h, gb, ratios)\n";
      return kInputError;
    }
  }
  const Trajectory traj = integrate(game, x0, cfg.T, cfg.dt, spec);

  if (!cfg.csv_path.empty()) {
    std::ofstream csv(cfg.csv_path);
    if (!csv) throw ParseError(cfg.csv_path, 0, "cannot write file");
    csv << "t";
    for (int i = 0; i < game.type.n(); ++i) csv << ",x_" << i + 1;
    for (const auto& name : traj.monitor_names) csv << "," << name;
    csv << "\n" << std::setprecision(17);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      csv << traj.times[k];
      for (int i = 0; i < game.type.n(); ++i) csv << "," << traj.states[k](i);
      for (const auto& series : traj.monitor_values) csv << "," << series[k];
      csv << "\n";
    }
  }

  struct Summary {
    double first, last, max_drift, max_increase;
  };
  std::vector<Summary> summaries;
  for (const auto& series : traj.monitor_values) {
    Summary s{series.front(), series.back(), 0.0, 0.0};
    for (std::size_t k = 1; k < series.size(); ++k) {
      s.max_drift = std::max(s.max_drift, std::abs(series[k] - series.front()));
      s.max_increase = std::max(s.max_increase, series[k] - series[k - 1]);
    }
    summaries.push_back(s);
  }
  if (cfg.format == "json") {
    json j;
    j["x0"] = to_json(x0);
    j["T"] = cfg.T;
    j["dt"] = cfg.dt;
    j["steps"] = traj.times.size() - 1;
    j["final_state"] = to_json(traj.states.back());
    j["max_renormalization"] = traj.max_renormalization;
    j["error"] = traj.error ? json(traj.error_message) : json(nullptr);
    j["monitors"] = json::object();
    for (std::size_t m = 0; m < summaries.size(); ++m) {
      j["monitors"][traj.monitor_names[m]] = {{"initial", summaries[m].first},
                                             {"final", summaries[m].last},
                                             {"max_drift", summaries[m].max_drift},
                                             {"max_step_increase", summaries[m].max_increase}};
    }
    out << j.dump(2) << "\n";
  } else {
    out << "x0: (" << join(x0) << ")\n";
    out << "steps: " << traj.times.size() - 1 << " (T = " << format_number(cfg.T) << ", dt = " << format_number(cfg.dt)
        << ")\n";
    out << "final state: (" << join(traj.states.back()) << ")\n";
    out << "max renormalization: " << traj.max_renormalization << "\n";
    for (std::size_t m = 0; m < summaries.size(); ++m) {
      out << "monitor " << traj.monitor_names[m] << ": initial " << summaries[m].first << ", final "
          << summaries[m].last << ", max drift " << summaries[m].max_drift << ", max step increase "
          << summaries[m].max_increase << "\n";
    }
    if (traj.error) out << "error: " << traj.error_message << "\n";
  }
  if (traj.error) {
    err << "integration aborted: " << traj.error_message << "\n";
    return kInputError;
  }
  return kOk;
}

int cmd_equilibrium(const RunConfig& cfg, const PolymatrixGame& game, std::ostream& out) {
  const EquilibriumSet eq = interior_equilibria(game);
  if (cfg.format == "json") {
    json j;
    j["consistent"] = eq.consistent;
    j["particular"] = eq.consistent ? to_json(eq.particular) : json(nullptr);
    j["interior"] = eq.interior;
    j["basis"] = json::array();
    for (int c = 0; c < eq.dimension(); ++c) j["basis"].push_back(to_json(Vector(eq.basis.col(c))));
    out << j.dump(2) << "\n";
  } else if (!eq.consistent) {
    out << "no formal equilibrium (inconsistent linear system)\n";
  } else {
    out << "formal equilibrium: (" << join(eq.particular) << ")\n";
    out << "interior: " << (eq.interior ? "yes" : "no") << "\n";
    out << "direction space dimension: " << eq.dimension() << "\n";
    for (int c = 0; c < eq.dimension(); ++c) out << "  (" << join(Vector(eq.basis.col(c))) << ")\n";
  }
  return kOk;
}

int cmd_lv2rep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.a_path.empty() || cfg.r_list.empty()) throw std::invalid_argument("lv2rep needs --A FILE and --r LIST");
  const LVSystem lv{read_matrix_file(cfg.a_path), parse_number_list(cfg.r_list)};
  const PolymatrixGame game = lv_to_replicator(lv);
  if (!cfg.emit_game_path.empty()) write_game_file(cfg.emit_game_path, game);
  if (cfg.format == "json") {
    out << json{{"type", game.type.groups()}, {"payoff", to_json(game.payoff)}}.dump(2) << "\n";
  } else {
    write_game(out, game);
  }
  return kOk;
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code) {
  RunConfig cfg;
  if (const char* env = std::getenv("POLYREP_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "ignoring non-numeric POLYREP_SEED\n";
    }
  }
  CLI::App app{"Analysis of polymatrix replicator systems"};
  app.require_subcommand(1);
  std::string monitors;

  auto add_common = [&](CLI::App* sub, bool needs_game) {
    if (needs_game) {
      sub->add_option("game,--game", cfg.game_path, "game file");
    }
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--tol", cfg.tol, "semidefiniteness tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed (default $POLYREP_SEED or 0)");
  };
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"check", "classify the game and list stable vertices"},
      {"vertices", "vertex matrices and their graphs"},
      {"reduce", "run the information-set reduction"},
      {"collapse", "reduce to a conservative (Hamiltonian) game"},
      {"simulate", "integrate the replicator flow"},
      {"equilibrium", "formal and interior equilibria"},
      {"lv2rep", "compactify a Lotka-Volterra system"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, name != "lv2rep");
    if (name == "collapse" || name == "lv2rep") sub->add_option("--emit-game", cfg.emit_game_path, "write game file");
    if (name == "simulate") {
      sub->add_option("--T", cfg.T, "duration")->check(CLI::NonNegativeNumber);
      sub->add_option("--dt", cfg.dt, "step")->check(CLI::PositiveNumber);
      sub->add_option("--x0", cfg.x0, "initial state LIST or random:SEED");
      sub->add_option("--monitors", monitors, "comma separated: h,gb,ratios");
      sub->add_option("--csv", cfg.csv_path, "write trajectory CSV");
    }
    if (name == "lv2rep") {
      sub->add_option("--A", cfg.a_path, "interaction matrix file")->required()->check(CLI::ExistingFile);
      sub->add_option("--r", cfg.r_list, "intrinsic rates LIST")->required();
    }
  }
  try {
    std::vector<std::string> args;
    for (int k = argc - 1; k >= 1; --k) args.emplace_back(argv[k]);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err) == 0 ? kOk : kInputError;
    return std::nullopt;
  }
  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (cfg.command != "lv2rep" && cfg.game_path.empty()) {
    err << "missing game file\n";
    exit_code = kInputError;
    return std::nullopt;
  }
  std::stringstream ms(monitors);
  for (std::string item; std::getline(ms, item, ',');) {
    if (!item.empty()) cfg.monitors.push_back(item);
  }
  exit_code = kOk;
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (!(cfg.tol > 0)) throw std::invalid_argument("tolerance must be positive");
    if (cfg.command == "lv2rep") return cmd_lv2rep(cfg, out);
    const PolymatrixGame game = read_game_file(cfg.game_path);
    if (cfg.command == "check") return cmd_check(cfg, game, out);
    if (cfg.command == "vertices") return cmd_vertices(cfg, game, out);
    if (cfg.command == "reduce") return cmd_reduce(cfg, game, out, err);
    if (cfg.command == "collapse") return cmd_collapse(cfg, game, out, err);
    if (cfg.command == "simulate") return cmd_simulate(cfg, game, out, err);
    if (cfg.command == "equilibrium") return cmd_equilibrium(cfg, game, out);
    err << "unknown command '" << cfg.command
        << "'\nusage: polyrep {check|vertices|reduce|collapse|simulate|equilibrium|lv2rep} ...\n";
    return kInputError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const CertificateFailure& e) {
    err << "certificate failure: " << e.what() << "\n";
    return kCertificateFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int code = kOk;
  const auto cfg = parse_args(argc, argv, out, err, code);
  if (!cfg) return code;
  return run(*cfg, out, err);
}

}  // namespace polyrep::cli

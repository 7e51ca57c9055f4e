#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polyrep/linalg.hpp"

namespace polyrep::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kNotAdmissible = 2,
  kNotDissipative = 3,
  kCertificateFailure = 4,
};

struct RunConfig {
  std::string command;  // check, vertices, reduce, collapse, simulate, equilibrium, lv2rep
  std::string game_path;
  std::string format = "text";  // text | json
  double tol = kSemidefTol;
  std::uint64_t seed = 0;
  double T = 100.0;
  double dt = 0.01;
  std::string x0;                     // "0.5,0.5,..." or "random:SEED"; empty = random:seed
  std::vector<std::string> monitors;  // h, gb, ratios
  std::string csv_path;
  std::string emit_game_path;
  std::string a_path;  // lv2rep
  std::string r_list;  // lv2rep
};

/// Parses argv (seed defaults to $POLYREP_SEED, else 0). Returns nullopt
/// after printing help or a usage error; `exit_code` receives the code.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polyrep::cli

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qgraph::cli {

// Every option of every subcommand. Unused fields keep their defaults.
struct ExperimentConfig {
  int star = 0;
  int v1 = 0;
  int v2 = 0;
  int m = 0;
  std::uint64_t seed = 1;
  int ensemble = 20;
  long levels = 2000;
  // Levels skipped below the spectral band; -1 selects 2000 V.
  long skip_levels = -1;
  double lambda_max = 0.0;
  std::string solver = "tracking";
  std::string tau = "0.01:0.3:0.01";
  std::vector<std::string> methods{"spectral"};
  int n = 0;
  std::string mode = "mb";
  double nu1 = -1.0;
  double nu2 = -1.0;
  double nu3 = -1.0;
  bool control = false;
  unsigned threads = 0;
  std::string out = ".";
  std::string output;
};

// Inclusive grid "from:to:step" (or a single value).
std::vector<double> parse_tau_grid(const std::string& spec);

// Parses argv, runs one subcommand, writes its files under --out and prints
// the JSON summary to `out`. Returns 0 iff the command finished without
// warnings.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

nlohmann::json versions();

}  // namespace qgraph::cli

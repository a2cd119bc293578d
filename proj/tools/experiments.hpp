#pragma once

// Experiment runners behind the CLI subcommands. Each takes a fully parsed
// option struct, drives the library, and returns a ResultTable whose
// metadata echoes everything needed to re-run it exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "udn/config.hpp"
#include "udn/optimizer.hpp"
#include "udn/result_table.hpp"
#include "udn/simulator.hpp"

namespace udn {

// Exit codes shared by the CLI and the runners.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitInternal = 4;

struct Sweep {
  std::string parameter;        // empty = no sweep
  std::vector<double> values;
};

struct AnalyzeOptions {
  std::string quantity = "rate_cdf";  // rate_cdf | sir_cdf | activity | rho |
                                      // cell_load_pmf | tagged_load_pmf | delay_pmf
  NetworkConfig config;
  Sweep sweep;
  double pmf_tol = 1e-12;
};

struct SimulateOptions {
  SimConfig config;
  double r_start = 0.0, r_step = 0.01, r_stop = 1.5;  // CDF evaluation grid
};

struct OptimizeOptions {
  std::string task = "n_star";  // n_star | tau_min | divergence
  DesignQuery query;
  double tau = 1.0;             // for n_star / divergence
  int n_probe = 1;              // for divergence
};

struct FigureOptions {
  std::string id = "fig2";      // fig2 .. fig8
  int drops = 100000;           // fig4 simulation overlay
  std::uint64_t seed = 1;
  std::optional<double> r0;     // fig5 override
  int n_max = 512;
  int threads = 0;
};

struct RunOutcome {
  ResultTable table;
  int exit_code = kExitOk;
  std::vector<std::string> warnings;
};

RunOutcome run_analyze(const AnalyzeOptions& opts);
RunOutcome run_simulate(const SimulateOptions& opts);
/// Per-drop records (drop, rate, sir, delay) for the same configuration.
ResultTable per_drop_table(const SimulationResult& result);
RunOutcome run_optimize(const OptimizeOptions& opts);
RunOutcome run_figure(const FigureOptions& opts);

}  // namespace udn

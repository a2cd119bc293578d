#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "udn/units.hpp"

namespace {

using namespace udn;

// "start:step:stop" or "v1,v2,v3"
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double a, b, c;
    char s1, s2;
    std::istringstream in(text);
    if (!(in >> a >> s1 >> b >> s2 >> c) || s1 != ':' || s2 != ':')
      throw std::invalid_argument("sweep: expected start:step:stop in '" + text + "'");
    if (!(b > 0.0) || c < a) throw std::invalid_argument("sweep: bad range '" + text + "'");
    for (double v = a; v <= c + 0.5 * b; v += b) out.push_back(v);
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::invalid_argument("sweep: empty value list");
  return out;
}

Sweep parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("sweep: expected param=values in '" + text + "'");
  return Sweep{text.substr(0, eq), parse_values(text.substr(eq + 1))};
}

std::string resolve_out_path(const std::string& path) {
  if (path.empty() || path == "-") return path;
  if (path.find('/') != std::string::npos) return path;
  if (const char* dir = std::getenv("UDN_OUTPUT_DIR"); dir && *dir)
    return std::string(dir) + "/" + path;
  return path;
}

void write_table(const ResultTable& table, const std::string& path, const std::string& format) {
  const std::string text = format == "json" ? table.to_json() : table.to_csv();
  const std::string resolved = resolve_out_path(path);
  if (resolved.empty() || resolved == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(resolved, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + resolved);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Analytical user-rate distribution, bandwidth-partition optimization, and Monte Carlo "
      "validation for randomly deployed dense wireless downlinks"};
  app.require_subcommand(1);
  app.fallthrough(true);  // --out/--format may follow the subcommand

  std::string out_path = "-";
  std::string format = "csv";
  app.add_option("--out", out_path, "output path ('-' = stdout; bare names honor UDN_OUTPUT_DIR)")
      ->capture_default_str();
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // ----- analyze -----
  AnalyzeOptions an;
  std::string an_theta0 = "1", an_scheme = "tdma", an_sweep;
  auto* analyze = app.add_subcommand("analyze", "evaluate closed-form quantities");
  analyze->add_option("--quantity", an.quantity,
                      "rate_cdf | sir_cdf | activity | rho | cell_load_pmf | "
                      "tagged_load_pmf | delay_pmf")
      ->capture_default_str();
  analyze->add_option("--tau", an.config.tau, "density ratio lambda_a/lambda_u");
  analyze->add_option("--alpha", an.config.alpha, "path-loss exponent");
  analyze->add_option("--theta0", an_theta0, "SIR threshold (linear, or dB with suffix)");
  analyze->add_option("--n", an.config.n_subchannels, "subchannel count");
  analyze->add_option("--scheme", an_scheme, "tdma | fdma_tdma");
  analyze->add_option("--sweep", an_sweep, "axis sweep, e.g. r=0:0.01:1 or n=1,2,4");
  analyze->add_option("--tol", an.pmf_tol, "PMF tail tolerance");

  // ----- simulate -----
  SimulateOptions sim;
  std::string sim_theta0 = "1", sim_scheme = "tdma", sim_rgrid = "0:0.01:1.5", per_drop_path;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo rate distribution");
  simulate->add_option("--lambda-a", sim.config.lambda_a, "AP density");
  simulate->add_option("--lambda-u", sim.config.lambda_u, "user density");
  simulate->add_option("--radius", sim.config.window_radius, "window radius (0 = auto)");
  simulate->add_option("--alpha", sim.config.alpha, "path-loss exponent");
  simulate->add_option("--theta0", sim_theta0, "SIR threshold (linear or dB)");
  simulate->add_option("--n", sim.config.n_subchannels, "subchannel count");
  simulate->add_option("--scheme", sim_scheme, "tdma | fdma_tdma");
  simulate->add_option("--drops", sim.config.n_drops, "Monte Carlo replications");
  simulate->add_option("--seed", sim.config.seed, "RNG seed");
  simulate->add_option("--threads", sim.config.n_threads, "worker threads (0 = auto)");
  simulate->add_option("--r-grid", sim_rgrid, "CDF grid start:step:stop");
  simulate->add_option("--per-drop", per_drop_path, "also write per-drop records here");

  // ----- optimize -----
  OptimizeOptions op;
  std::string op_theta0 = "-6dB", op_scheme = "fdma_tdma";
  auto* optimize = app.add_subcommand("optimize", "design searches and bounds");
  optimize->add_option("--task", op.task, "n_star | tau_min | divergence")->capture_default_str();
  optimize->add_option("--r0", op.query.r0, "target rate, b/s/Hz");
  optimize->add_option("--epsilon", op.query.epsilon, "outage constraint");
  optimize->add_option("--theta0", op_theta0, "SIR threshold (linear or dB)");
  optimize->add_option("--alpha", op.query.alpha, "path-loss exponent");
  optimize->add_option("--scheme", op_scheme, "tdma | fdma_tdma");
  optimize->add_option("--n-max", op.query.n_max, "subchannel search ceiling");
  optimize->add_option("--tau", op.tau, "density ratio (n_star / divergence tasks)");
  optimize->add_option("--tau-lo", op.query.tau_lo, "tau bracket low (tau_min task)");
  optimize->add_option("--tau-hi", op.query.tau_hi, "tau bracket high (tau_min task)");
  optimize->add_option("--n-probe", op.n_probe, "starting N (divergence task)");

  // ----- figure -----
  FigureOptions fig;
  double fig_r0 = -1.0;
  auto* figure = app.add_subcommand("figure", "reproduce a figure's data series");
  figure->add_option("--id", fig.id, "fig2 .. fig8")->capture_default_str();
  figure->add_option("--drops", fig.drops, "simulation drops (fig4)");
  figure->add_option("--seed", fig.seed, "RNG seed (fig4)");
  figure->add_option("--r0", fig_r0, "target-rate override (fig5)");
  figure->add_option("--n-max", fig.n_max, "search ceiling (fig6-fig8)");
  figure->add_option("--threads", fig.threads, "worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    RunOutcome outcome;
    if (*analyze) {
      an.config.theta0 = parse_theta0(an_theta0);
      an.config.scheme = scheme_from_string(an_scheme);
      if (!an_sweep.empty()) an.sweep = parse_sweep(an_sweep);
      outcome = run_analyze(an);
    } else if (*simulate) {
      sim.config.theta0 = parse_theta0(sim_theta0);
      sim.config.scheme = scheme_from_string(sim_scheme);
      const auto grid = parse_values(sim_rgrid);
      if (grid.size() < 2) throw std::invalid_argument("r-grid: need start:step:stop");
      sim.r_start = grid.front();
      sim.r_step = grid[1] - grid[0];
      sim.r_stop = grid.back();
      outcome = run_simulate(sim);
      if (!per_drop_path.empty()) {
        const SimulationResult full = empirical_rate_cdf(sim.config);
        write_table(per_drop_table(full), per_drop_path, format);
      }
    } else if (*optimize) {
      op.query.theta0 = parse_theta0(op_theta0);
      op.query.scheme = scheme_from_string(op_scheme);
      outcome = run_optimize(op);
    } else {
      if (fig_r0 > 0.0) fig.r0 = fig_r0;
      outcome = run_figure(fig);
    }
    write_table(outcome.table, out_path, format);
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
    // Wall time goes to stderr, not into the table: emitted tables must be
    // byte-identical across reruns of the same seed.
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::cerr << "done in " << ms << " ms\n";
    return outcome.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

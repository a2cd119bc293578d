#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "udn/analytics.hpp"

namespace udn {

namespace {

void echo_network_config(ResultTable& t, const NetworkConfig& c) {
  t.set_meta("tau", c.tau);
  t.set_meta("alpha", c.alpha);
  t.set_meta("theta0_linear", c.theta0);
  t.set_meta("n_subchannels", double(c.n_subchannels));
  t.set_meta("scheme", std::string(to_string(c.scheme)));
}

void echo_common(ResultTable& t) {
  t.set_meta("version", kVersion);
  t.set_meta("units", "rates b/s/Hz; theta linear; densities per unit area");
}

std::vector<double> linear_grid(double start, double step, double stop) {
  if (!(step > 0.0) || stop < start)
    throw std::invalid_argument("grid: need step > 0 and stop >= start");
  std::vector<double> g;
  for (double v = start; v <= stop + 0.5 * step; v += step) g.push_back(v);
  return g;
}

NetworkConfig with_axis(NetworkConfig base, const std::string& param, double value) {
  if (param == "tau")
    base.tau = value;
  else if (param == "alpha")
    base.alpha = value;
  else if (param == "theta0")
    base.theta0 = value;
  else if (param == "n")
    base.n_subchannels = int(std::lround(value));
  else
    throw std::invalid_argument("sweep: unknown parameter '" + param + "'");
  return base;
}

}  // namespace

RunOutcome run_analyze(const AnalyzeOptions& opts) {
  RunOutcome out;
  ResultTable& t = out.table;
  const NetworkConfig& c = opts.config;
  c.validate();
  echo_common(t);
  t.set_meta("command", "analyze");
  t.set_meta("quantity", opts.quantity);
  echo_network_config(t, c);

  const bool swept = !opts.sweep.parameter.empty();
  if (swept && opts.sweep.values.empty())
    throw std::invalid_argument("sweep: value list must not be empty");

  if (opts.quantity == "cell_load_pmf" || opts.quantity == "tagged_load_pmf" ||
      opts.quantity == "delay_pmf") {
    if (swept) throw std::invalid_argument("sweep: PMF quantities emit rows per k, no sweep");
    DiscretePmf pmf = opts.quantity == "cell_load_pmf"
                          ? cell_load_pmf(c.tau, opts.pmf_tol)
                          : opts.quantity == "tagged_load_pmf"
                                ? tagged_cell_load_pmf(c.tau, opts.pmf_tol)
                                : delay_pmf(c, opts.pmf_tol);
    std::vector<double> k(pmf.size()), p(pmf.size());
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      k[i] = double(i);
      p[i] = pmf[i];
    }
    t.add_column("k", std::move(k));
    t.add_column("probability", std::move(p));
    t.set_meta("tail_mass", pmf.tail_mass());
    return out;
  }

  if (opts.quantity == "rho") {
    const Sweep sweep = swept ? opts.sweep : Sweep{"theta", {c.theta0}};
    if (sweep.parameter != "theta")
      throw std::invalid_argument("sweep: rho sweeps over 'theta' only");
    std::vector<double> value;
    value.reserve(sweep.values.size());
    for (double theta : sweep.values) value.push_back(rho(theta, c.alpha));
    t.add_column("theta", sweep.values);
    t.add_column("rho", std::move(value));
    return out;
  }

  if (opts.quantity == "sir_cdf") {
    const Sweep sweep = swept ? opts.sweep : Sweep{"theta", {c.theta0}};
    if (sweep.parameter != "theta")
      throw std::invalid_argument("sweep: sir_cdf sweeps over 'theta' only");
    const SirCdf f = sir_cdf(c);
    std::vector<double> value;
    value.reserve(sweep.values.size());
    for (double theta : sweep.values) value.push_back(f(theta));
    t.add_column("theta", sweep.values);
    t.add_column("sir_cdf", std::move(value));
    t.set_meta("activity_probability", f.activity_probability);
    return out;
  }

  if (opts.quantity == "activity") {
    const Sweep sweep = swept ? opts.sweep : Sweep{"n", {double(c.n_subchannels)}};
    std::vector<double> value;
    value.reserve(sweep.values.size());
    for (double v : sweep.values)
      value.push_back(activity_probability(with_axis(c, sweep.parameter, v)));
    t.add_column(sweep.parameter, sweep.values);
    t.add_column("activity_probability", std::move(value));
    return out;
  }

  if (opts.quantity == "rate_cdf") {
    const Sweep sweep = swept ? opts.sweep : Sweep{"r", {0.1}};
    if (sweep.parameter == "r") {
      const RateCdf f = rate_cdf(c, opts.pmf_tol);
      std::vector<double> value, upper;
      for (double r : sweep.values) {
        const RateCdfValue v = f.eval(r);
        value.push_back(v.value);
        upper.push_back(v.upper_bound);
      }
      t.add_column("r", sweep.values);
      t.add_column("rate_cdf", std::move(value));
      t.add_column("rate_cdf_upper", std::move(upper));
      t.set_meta("delay_tail_mass", f.delay().tail_mass());
      return out;
    }
    // Sweep of a config axis at fixed r (taken from the single-point grid).
    std::vector<double> value;
    for (double v : sweep.values)
      value.push_back(rate_cdf(with_axis(c, sweep.parameter, v), opts.pmf_tol)(0.1));
    t.add_column(sweep.parameter, sweep.values);
    t.add_column("rate_cdf_at_0.1", std::move(value));
    return out;
  }

  throw std::invalid_argument("analyze: unknown quantity '" + opts.quantity + "'");
}

RunOutcome run_simulate(const SimulateOptions& opts) {
  RunOutcome out;
  opts.config.validate();
  const SimulationResult sim = empirical_rate_cdf(opts.config);

  const NetworkConfig analytic_cfg{opts.config.lambda_a / opts.config.lambda_u,
                                   opts.config.alpha, opts.config.theta0,
                                   opts.config.n_subchannels, opts.config.scheme};
  const RateCdf analytic = rate_cdf(analytic_cfg);

  ResultTable& t = out.table;
  echo_common(t);
  t.set_meta("command", "simulate");
  echo_network_config(t, analytic_cfg);
  t.set_meta("lambda_a", opts.config.lambda_a);
  t.set_meta("lambda_u", opts.config.lambda_u);
  t.set_meta("window_radius", sim.config.window_radius);
  t.set_meta("truncation_fraction",
             interference_truncation_fraction(sim.config.window_radius, opts.config.lambda_a,
                                              opts.config.alpha));
  t.set_meta("n_drops", double(opts.config.n_drops));
  t.set_meta("seed", std::to_string(opts.config.seed));
  t.set_meta("resamples", double(sim.resamples));
  t.set_meta("infinite_sir_drops", double(sim.infinite_sir_drops));
  t.set_meta("mean_active_interferers", sim.mean_active_interferers);
  t.set_meta("outage_delay_dependence_gap", sim.audit.dependence_gap());

  const std::vector<double> grid = linear_grid(opts.r_start, opts.r_step, opts.r_stop);
  std::vector<double> emp, lo, hi, ana;
  const double eps = sim.rate_cdf.dkw_epsilon();
  for (double r : grid) {
    const double f = sim.rate_cdf(r);
    emp.push_back(f);
    lo.push_back(std::max(0.0, f - eps));
    hi.push_back(std::min(1.0, f + eps));
    ana.push_back(analytic(r));
  }
  t.add_column("r", grid);
  t.add_column("rate_cdf_empirical", std::move(emp));
  t.add_column("band_low", std::move(lo));
  t.add_column("band_high", std::move(hi));
  t.add_column("rate_cdf_analytic", std::move(ana));
  t.set_meta("dkw_epsilon_95", eps);
  t.set_meta("ks_distance_vs_analytic",
             ks_distance(sim.rate_cdf, [&](double r) { return r < 0.0 ? 0.0 : analytic(r); }));
  return out;
}

ResultTable per_drop_table(const SimulationResult& result) {
  ResultTable t;
  t.set_meta("version", kVersion);
  t.set_meta("command", "simulate --per-drop");
  t.set_meta("seed", std::to_string(result.config.seed));
  std::vector<double> drop(result.rates.size()), delay(result.rates.size());
  for (std::size_t i = 0; i < result.rates.size(); ++i) {
    drop[i] = double(i);
    delay[i] = double(result.delays[i]);
  }
  t.add_column("drop", std::move(drop));
  t.add_column("rate", result.rates);
  t.add_column("sir", result.sirs);
  t.add_column("delay", std::move(delay));
  return t;
}

RunOutcome run_optimize(const OptimizeOptions& opts) {
  RunOutcome out;
  opts.query.validate();
  ResultTable& t = out.table;
  echo_common(t);
  t.set_meta("command", "optimize");
  t.set_meta("task", opts.task);
  t.set_meta("r0", opts.query.r0);
  t.set_meta("epsilon", opts.query.epsilon);
  t.set_meta("theta0_linear", opts.query.theta0);
  t.set_meta("alpha", opts.query.alpha);
  t.set_meta("scheme", std::string(to_string(opts.query.scheme)));
  t.set_meta("n_max", double(opts.query.n_max));

  if (opts.query.epsilon > 0.1)
    out.warnings.push_back(
        "epsilon exceeds the small-epsilon regime (0.1); the closed-form density "
        "bound may not dominate the search result");

  if (opts.task == "n_star") {
    t.set_meta("tau", opts.tau);
    const DesignResult r = optimal_n(opts.query, opts.tau);
    std::vector<double> n, f;
    for (const auto& pt : r.objective_trace) {
      n.push_back(pt.parameter);
      f.push_back(pt.outage);
    }
    t.add_column("n", std::move(n));
    t.add_column("outage", std::move(f));
    t.set_meta("n_star", double(r.n_star));
    t.set_meta("n_star_lb", double(r.n_star_lb));
    t.set_meta("outage_at_n_star", r.achieved_outage);
    t.set_meta("meets_epsilon", r.feasible ? "true" : "false");
    if (r.tail_warning)
      out.warnings.push_back("objective still nonincreasing at n_max; raise n_max");
    return out;
  }

  if (opts.task == "tau_min") {
    t.set_meta("tau_lo", opts.query.tau_lo);
    t.set_meta("tau_hi", opts.query.tau_hi);
    const DesignResult r = tau_min_search(opts.query);
    std::vector<double> tau, f;
    for (const auto& pt : r.objective_trace) {
      tau.push_back(pt.parameter);
      f.push_back(pt.outage);
    }
    t.add_column("tau", std::move(tau));
    t.add_column("min_outage_over_n", std::move(f));
    t.set_meta("feasible", r.feasible ? "true" : "false");
    t.set_meta("n_star_lb", double(r.n_star_lb));
    if (r.feasible) {
      t.set_meta("tau_min", r.tau_min);
      t.set_meta("n_at_tau_min", double(r.n_at_tau_min));
      t.set_meta("outage_at_tau_min", r.achieved_outage);
    } else {
      t.set_meta("achieved_outage_at_tau_hi", r.achieved_outage);
      out.exit_code = kExitInfeasible;
      out.warnings.push_back("constraint unreachable within the tau range");
    }
    if (!std::isnan(r.tau_min_ub)) {
      t.set_meta("tau_min_ub", r.tau_min_ub);
      const DesignQuery& q = opts.query;
      t.set_meta("tau_min_asymptotic_small_r0",
                 tau_min_asymptotic(q, AsymptoticRegime::kSmallR0));
      t.set_meta("tau_min_asymptotic_large_r0",
                 tau_min_asymptotic(q, AsymptoticRegime::kLargeR0));
    }
    return out;
  }

  if (opts.task == "divergence") {
    t.set_meta("tau", opts.tau);
    const NetworkConfig c{opts.tau, opts.query.alpha, opts.query.theta0, 1, opts.query.scheme};
    const DivergenceReport r = divergence_check(c, opts.query.r0, opts.n_probe);
    std::vector<double> n, f;
    for (const auto& pt : r.trace) {
      n.push_back(pt.parameter);
      f.push_back(pt.outage);
    }
    t.add_column("n", std::move(n));
    t.add_column("outage", std::move(f));
    t.set_meta("requested", r.requested ? "true" : "false");
    t.set_meta("n_at_target", double(r.n_at_target));
    t.set_meta("attained", r.attained);
    t.set_meta("monotone_tail", r.monotone_tail ? "true" : "false");
    return out;
  }

  throw std::invalid_argument("optimize: unknown task '" + opts.task + "'");
}

}  // namespace udn

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "udn/analytics.hpp"

namespace udn {

namespace {

constexpr double kDefaultAlpha = 3.0;
const double kDefaultTheta0 = std::pow(10.0, -0.6);  // -6 dB
const std::vector<double> kTauSet = {0.1, 1.0, 10.0};

std::string tau_label(double tau) {
  if (tau == 0.1) return "0.1";
  if (tau == 1.0) return "1";
  if (tau == 10.0) return "10";
  return format_double(tau);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = lo * std::pow(hi / lo, double(i) / (count - 1));
  return g;
}

void base_meta(ResultTable& t, const std::string& id) {
  t.set_meta("version", kVersion);
  t.set_meta("command", "figure " + id);
  t.set_meta("units", "rates b/s/Hz; theta linear; densities per unit area");
}

// Activity probability vs N for both schemes and the standard tau set.
ResultTable fig2() {
  ResultTable t;
  std::vector<double> ns;
  for (int n = 1; n <= 20; ++n) ns.push_back(n);
  t.add_column("n", ns);
  for (Scheme s : {Scheme::kFdmaTdma, Scheme::kTdma})
    for (double tau : kTauSet) {
      std::vector<double> p;
      for (int n = 1; n <= 20; ++n)
        p.push_back(activity_probability({tau, kDefaultAlpha, 1.0, n, s}));
      t.add_column("p_" + std::string(to_string(s)) + "_tau" + tau_label(tau), std::move(p));
    }
  return t;
}

// Mean delay vs N.
ResultTable fig3() {
  ResultTable t;
  std::vector<double> ns;
  for (int n = 1; n <= 20; ++n) ns.push_back(n);
  t.add_column("n", ns);
  for (Scheme s : {Scheme::kFdmaTdma, Scheme::kTdma})
    for (double tau : kTauSet) {
      std::vector<double> m;
      for (int n = 1; n <= 20; ++n)
        m.push_back(delay_pmf({tau, kDefaultAlpha, 1.0, n, s}).mean());
      t.add_column("mean_delay_" + std::string(to_string(s)) + "_tau" + tau_label(tau),
                   std::move(m));
    }
  return t;
}

// Rate CDF curves (0 dB threshold) with a simulation overlay at tau = 1.
ResultTable fig4(const FigureOptions& opts) {
  ResultTable t;
  const double theta0 = 1.0;  // 0 dB
  std::vector<double> rs;
  for (double r = 0.0; r <= 1.2000001; r += 0.005) rs.push_back(r);
  t.add_column("r", rs);
  for (Scheme s : {Scheme::kFdmaTdma, Scheme::kTdma})
    for (double tau : kTauSet)
      for (int n : {1, 5, 10}) {
        const RateCdf f = rate_cdf({tau, kDefaultAlpha, theta0, n, s});
        std::vector<double> v;
        v.reserve(rs.size());
        for (double r : rs) v.push_back(f(r));
        t.add_column("F_" + std::string(to_string(s)) + "_tau" + tau_label(tau) + "_n" +
                         std::to_string(n),
                     std::move(v));
      }
  // Simulation overlay for tau = 1 on a shared deployment ensemble.
  SimConfig base;
  base.lambda_a = base.lambda_u = 1.0;
  base.alpha = kDefaultAlpha;
  base.theta0 = theta0;
  base.n_drops = opts.drops;
  base.seed = opts.seed;
  base.n_threads = opts.threads;
  std::vector<std::pair<Scheme, int>> variants;
  for (Scheme s : {Scheme::kFdmaTdma, Scheme::kTdma})
    for (int n : {1, 5, 10}) variants.emplace_back(s, n);
  const auto sims = empirical_rate_cdf_batch(base, variants);
  for (std::size_t i = 0; i < variants.size(); ++i) {
    std::vector<double> v;
    v.reserve(rs.size());
    for (double r : rs) v.push_back(sims[i].rate_cdf(r));
    t.add_column("Fsim_" + std::string(to_string(variants[i].first)) + "_tau1_n" +
                     std::to_string(variants[i].second),
                 std::move(v));
  }
  t.set_meta("sim_drops", double(opts.drops));
  t.set_meta("seed", std::to_string(opts.seed));
  t.set_meta("sim_dkw_epsilon_95", sims.front().rate_cdf.dkw_epsilon());
  t.set_meta("theta0_linear", theta0);
  return t;
}

// Outage at a fixed target rate vs N.
ResultTable fig5(const FigureOptions& opts) {
  ResultTable t;
  const double rbar = min_conditional_rate(kDefaultTheta0);
  const double r0 = opts.r0.value_or(rbar / 5.0);
  std::vector<double> ns;
  for (int n = 1; n <= 30; ++n) ns.push_back(n);
  t.add_column("n", ns);
  for (Scheme s : {Scheme::kFdmaTdma, Scheme::kTdma})
    for (double tau : kTauSet) {
      std::vector<double> v;
      for (int n = 1; n <= 30; ++n)
        v.push_back(rate_cdf({tau, kDefaultAlpha, kDefaultTheta0, n, s})(r0));
      t.add_column("F_" + std::string(to_string(s)) + "_tau" + tau_label(tau), std::move(v));
    }
  t.set_meta("r0", r0);
  t.set_meta("theta0_linear", kDefaultTheta0);
  return t;
}

// Minimum outage over N vs target rate; conventional TDMA keeps N = 1.
ResultTable fig6(const FigureOptions& opts) {
  ResultTable t;
  const std::vector<double> r0s = log_grid(0.02, 2.0, 30);
  t.add_column("r0", r0s);
  for (Scheme s : {Scheme::kFdmaTdma, Scheme::kTdma}) {
    std::vector<double> v, nstar;
    for (double r0 : r0s) {
      DesignQuery q;
      q.r0 = r0;
      q.theta0 = kDefaultTheta0;
      q.alpha = kDefaultAlpha;
      q.scheme = s;
      q.n_max = opts.n_max;
      const DesignResult r = optimal_n(q, 1.0);
      v.push_back(r.achieved_outage);
      nstar.push_back(double(r.n_star));
    }
    t.add_column("F_" + std::string(to_string(s)), std::move(v));
    t.add_column("n_star_" + std::string(to_string(s)), std::move(nstar));
  }
  std::vector<double> conv;
  for (double r0 : r0s)
    conv.push_back(rate_cdf({1.0, kDefaultAlpha, kDefaultTheta0, 1, Scheme::kTdma})(r0));
  t.add_column("F_conventional_tdma", std::move(conv));
  t.set_meta("tau", 1.0);
  t.set_meta("theta0_linear", kDefaultTheta0);
  return t;
}

// Outage vs SIR threshold at r0 = 0.1, N re-optimized per threshold, plus the
// degradation curve when N is optimized while ignoring the threshold.
ResultTable fig7(const FigureOptions& opts) {
  ResultTable t;
  const double r0 = 0.1, tau = 1.0;
  std::vector<double> theta_db;
  for (double db = -20.0; db <= 5.0001; db += 1.0) theta_db.push_back(db);
  t.add_column("theta0_db", theta_db);

  auto optimize_at = [&](Scheme s, double theta0) {
    DesignQuery q;
    q.r0 = r0;
    q.theta0 = theta0;
    q.alpha = kDefaultAlpha;
    q.scheme = s;
    q.n_max = opts.n_max;
    return optimal_n(q, tau);
  };

  for (Scheme s : {Scheme::kFdmaTdma, Scheme::kTdma}) {
    std::vector<double> v;
    for (double db : theta_db)
      v.push_back(optimize_at(s, std::pow(10.0, db / 10.0)).achieved_outage);
    t.add_column("F_" + std::string(to_string(s)) + "_n_opt", std::move(v));
  }
  {
    std::vector<double> v;
    for (double db : theta_db)
      v.push_back(
          rate_cdf({tau, kDefaultAlpha, std::pow(10.0, db / 10.0), 1, Scheme::kTdma})(r0));
    t.add_column("F_conventional_tdma", std::move(v));
  }
  {
    // N chosen once assuming theta0 = 0, then evaluated at the actual threshold.
    const int n_ignoring = optimize_at(Scheme::kFdmaTdma, 0.0).n_star;
    std::vector<double> v;
    for (double db : theta_db)
      v.push_back(rate_cdf(
          {tau, kDefaultAlpha, std::pow(10.0, db / 10.0), n_ignoring, Scheme::kFdmaTdma})(r0));
    t.add_column("F_fdma_tdma_n_opt_at_0db", std::move(v));
    t.set_meta("n_opt_assuming_theta0_zero", double(n_ignoring));
  }
  t.set_meta("r0", r0);
  t.set_meta("tau", tau);
  return t;
}

// Minimum density ratio vs target rate under a 0.1 outage constraint, with
// the closed-form bound and its asymptotes alongside.
ResultTable fig8(const FigureOptions& opts) {
  ResultTable t;
  const std::vector<double> r0s = log_grid(0.01, 1.0, 20);
  t.add_column("r0", r0s);
  auto search = [&](Scheme s, double r0, int n_max) {
    DesignQuery q;
    q.r0 = r0;
    q.epsilon = 0.1;
    q.theta0 = kDefaultTheta0;
    q.alpha = kDefaultAlpha;
    q.scheme = s;
    q.n_max = n_max;
    q.tau_lo = 1e-4;
    q.tau_hi = 1e3;
    return tau_min_search(q).tau_min;
  };
  for (Scheme s : {Scheme::kFdmaTdma, Scheme::kTdma}) {
    std::vector<double> v;
    for (double r0 : r0s) v.push_back(search(s, r0, opts.n_max));
    t.add_column("tau_min_" + std::string(to_string(s)), std::move(v));
  }
  {
    std::vector<double> v;
    for (double r0 : r0s) v.push_back(search(Scheme::kTdma, r0, 1));  // conventional
    t.add_column("tau_min_conventional_tdma", std::move(v));
  }
  {
    std::vector<double> ub, small, large;
    for (double r0 : r0s) {
      DesignQuery q;
      q.r0 = r0;
      q.epsilon = 0.1;
      q.theta0 = kDefaultTheta0;
      q.alpha = kDefaultAlpha;
      q.scheme = Scheme::kFdmaTdma;
      ub.push_back(tau_min_upper_bound(q));
      small.push_back(tau_min_asymptotic(q, AsymptoticRegime::kSmallR0));
      large.push_back(tau_min_asymptotic(q, AsymptoticRegime::kLargeR0));
    }
    t.add_column("tau_min_bound", std::move(ub));
    t.add_column("tau_min_asymptotic_small_r0", std::move(small));
    t.add_column("tau_min_asymptotic_large_r0", std::move(large));
  }
  t.set_meta("epsilon", 0.1);
  t.set_meta("theta0_linear", kDefaultTheta0);
  return t;
}

}  // namespace

RunOutcome run_figure(const FigureOptions& opts) {
  RunOutcome out;
  if (opts.id == "fig2")
    out.table = fig2();
  else if (opts.id == "fig3")
    out.table = fig3();
  else if (opts.id == "fig4")
    out.table = fig4(opts);
  else if (opts.id == "fig5")
    out.table = fig5(opts);
  else if (opts.id == "fig6")
    out.table = fig6(opts);
  else if (opts.id == "fig7")
    out.table = fig7(opts);
  else if (opts.id == "fig8")
    out.table = fig8(opts);
  else
    throw std::invalid_argument("figure: unknown id '" + opts.id + "' (fig2..fig8)");
  base_meta(out.table, opts.id);
  return out;
}

}  // namespace udn

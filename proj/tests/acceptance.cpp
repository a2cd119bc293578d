// Acceptance suite: end-to-end checks of every deliverable behavior, with
// one pass/fail line per check and hard tolerances pinned in code. Runs
// everything even after a failure and exits nonzero if anything failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "oracle_helpers.hpp"
#include "udn/analytics.hpp"
#include "udn/optimizer.hpp"
#include "udn/simulator.hpp"

using namespace udn;

namespace {

int g_checks = 0;
int g_failures = 0;

void report(bool ok, const std::string& label, const std::string& detail) {
  ++g_checks;
  if (!ok) ++g_failures;
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", label.c_str(), detail.c_str());
  std::fflush(stdout);
}

void check_close(const std::string& label, double got, double expected, double tol) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "got %.6g, expected %.6g (tol %.1g)", got, expected, tol);
  report(std::abs(got - expected) <= tol, label, buf);
}

void check_le(const std::string& label, double lhs, double rhs, const char* note = "") {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%.6g <= %.6g %s", lhs, rhs, note);
  report(lhs <= rhs, label, buf);
}

void check_eq_int(const std::string& label, long got, long expected) {
  char buf[120];
  std::snprintf(buf, sizeof buf, "got %ld, expected %ld", got, expected);
  report(got == expected, label, buf);
}

void check_true(const std::string& label, bool ok, const std::string& detail) {
  report(ok, label, detail);
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const double kTheta0Db6 = std::pow(10.0, -0.6);

// ---------------------------------------------------------------------------

void criterion_1_spot_values() {
  const auto t0 = std::chrono::steady_clock::now();

  const double expected_zero[3] = {0.0023, 0.3227, 0.8809};
  const double taus[3] = {0.1, 1.0, 10.0};
  for (int i = 0; i < 3; ++i)
    check_close("C1 tagged-load zero probability, tau=" + std::to_string(taus[i]),
                tagged_cell_load_pmf(taus[i])[0], expected_zero[i], 5e-4);

  // The occupied-cell probability at tau = 1. Its exact closed form is
  // 1 - (3.5/4.5)^3.5 = 0.58505...; the quoted two-decimal figure 0.58 is a
  // truncation of that value, so the check pins the closed form and verifies
  // the quoted bound at the precision it was stated with.
  const double pk_pos = prob_cell_occupied(1.0);
  check_close("C1 occupied-cell probability, tau=1 (closed form)", pk_pos,
              1.0 - std::pow(3.5 / 4.5, 3.5), 5e-4);
  check_le("C1 occupied-cell probability vs quoted 0.58 (truncated from 0.5851)", pk_pos,
           0.585 + 5e-4);
  bool activity_bounded = true;
  for (Scheme s : {Scheme::kTdma, Scheme::kFdmaTdma})
    for (int n : {1, 2, 8})
      activity_bounded &= activity_probability({1.0, 3.0, 1.0, n, s}) <= pk_pos + 1e-12;
  check_true("C1 per-subchannel activity never exceeds the occupied-cell probability",
             activity_bounded, "checked both schemes, n in {1,2,8}");

  check_close("C1 rate floor at -6 dB threshold", min_conditional_rate(kTheta0Db6), 0.3233,
              5e-4);

  char buf[80];
  std::snprintf(buf, sizeof buf, "%.3f s (budget 1 s)", elapsed_s(t0));
  report(elapsed_s(t0) < 1.0, "C1 runtime", buf);
}

void criterion_2_rate_cdf_anchors() {
  const int ns[3] = {1, 5, 10};
  const double expected[3] = {0.49, 0.25, 0.15};
  for (int i = 0; i < 3; ++i) {
    const RateCdf f = rate_cdf({1.0, 3.0, 1.0, ns[i], Scheme::kFdmaTdma});
    check_close("C2 rate outage at r=0.1, n=" + std::to_string(ns[i]), f(0.1), expected[i],
                0.01);
  }
}

void criterion_3_optimizer_anchors() {
  check_eq_int("C3 partition lower bound at r0 = floor/5 point",
               n_star_lower_bound(kTheta0Db6, min_conditional_rate(kTheta0Db6) / 5.0), 5);

  DesignQuery q;
  q.r0 = min_conditional_rate(kTheta0Db6) / 5.0;
  q.epsilon = 0.1;
  q.theta0 = kTheta0Db6;
  q.alpha = 3.0;
  q.n_max = 512;

  struct Case {
    Scheme scheme;
    double tau;
    int expected;
  };
  const Case cases[] = {{Scheme::kFdmaTdma, 0.1, 12},
                        {Scheme::kFdmaTdma, 1.0, 5},
                        {Scheme::kFdmaTdma, 10.0, 5},
                        {Scheme::kTdma, 10.0, 5}};
  for (const Case& c : cases) {
    q.scheme = c.scheme;
    const auto t0 = std::chrono::steady_clock::now();
    const DesignResult r = optimal_n(q, c.tau);
    const double secs = elapsed_s(t0);
    char label[96];
    std::snprintf(label, sizeof label, "C3 optimal partitions, %s tau=%g",
                  std::string(to_string(c.scheme)).c_str(), c.tau);
    check_eq_int(label, r.n_star, c.expected);
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.2f s (budget 10 s)", secs);
    report(secs < 10.0, std::string(label) + " runtime", buf);
  }
}

void criterion_4_density_bounds() {
  const auto t0 = std::chrono::steady_clock::now();
  DesignQuery q;
  q.epsilon = 0.1;
  q.theta0 = kTheta0Db6;
  q.alpha = 3.0;
  q.n_max = 512;
  q.tau_lo = 1e-4;
  q.tau_hi = 100.0;

  for (double r0 : {0.02, 0.05, 0.1, 0.3233}) {
    q.r0 = r0;
    q.scheme = Scheme::kFdmaTdma;
    const DesignResult r = tau_min_search(q);
    char buf[224];
    if (!r.feasible) {
      std::snprintf(buf, sizeof buf, "search infeasible up to tau=%g", q.tau_hi);
      report(false, "C4 bound consistency, r0=" + std::to_string(r0), buf);
      continue;
    }
    const bool ok = r.tau_min <= r.tau_min_ub * (1.0 + 2e-3);  // bisection slop
    std::snprintf(buf, sizeof buf, "searched tau_min %.5g vs closed-form bound %.5g%s",
                  r.tau_min, r.tau_min_ub,
                  ok ? ""
                     : " -- bound holds only for asymptotically small epsilon; at "
                       "epsilon=0.1 and r0 at the rate floor its no-sharing premise "
                       "(zero-delay probability ~ 0.75, not ~ 1) fails, and the exact "
                       "search genuinely exceeds it");
    report(ok, "C4 bound consistency, r0=" + std::to_string(r0), buf);
  }

  q.r0 = 0.02;
  q.scheme = Scheme::kFdmaTdma;
  const double tau_f = tau_min_search(q).tau_min;
  q.scheme = Scheme::kTdma;
  const double tau_t = tau_min_search(q).tau_min;
  const double ratio = tau_t / tau_f;
  char buf[160];
  std::snprintf(buf, sizeof buf, "tdma/fdma_tdma = %.4g (required within [1.2, 1.8])", ratio);
  report(ratio >= 1.2 && ratio <= 1.8, "C4 scheme density ratio at r0=0.02", buf);

  std::snprintf(buf, sizeof buf, "%.1f s (budget 300 s)", elapsed_s(t0));
  report(elapsed_s(t0) < 300.0, "C4 runtime", buf);
}

void criterion_5_simulation_vs_analysis() {
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig base;
  base.lambda_a = base.lambda_u = 1.0;
  base.alpha = 3.0;
  base.theta0 = 1.0;  // 0 dB
  base.n_drops = 100000;
  base.seed = 20240814;
  base.n_threads = 0;
  // The KS tolerance resolves structure below the default window's 1%
  // truncated-interference budget (the missing far field inflates the
  // simulated SIR exactly in the low-activity, high-SIR regime), so this run
  // halves the budget, doubling the window radius.
  base.bias_budget = 0.005;

  std::vector<std::pair<Scheme, int>> variants;
  for (Scheme s : {Scheme::kFdmaTdma, Scheme::kTdma})
    for (int n : {1, 5, 10}) variants.emplace_back(s, n);

  const auto sims = empirical_rate_cdf_batch(base, variants);
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const NetworkConfig cfg{1.0, 3.0, 1.0, variants[v].second, variants[v].first};
    const RateCdf analytic = rate_cdf(cfg);
    const double d =
        ks_distance(sims[v].rate_cdf, [&](double r) { return r < 0.0 ? 0.0 : analytic(r); });
    char label[96], buf[160];
    std::snprintf(label, sizeof label, "C5 simulated rate distribution, %s n=%d",
                  std::string(to_string(variants[v].first)).c_str(), variants[v].second);
    std::snprintf(buf, sizeof buf,
                  "KS distance %.4f (limit 0.02, 1e5 drops); outage-delay dependence gap %.4f",
                  d, sims[v].audit.dependence_gap());
    report(d <= 0.02, label, buf);
  }
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.1f s (budget 600 s)", elapsed_s(t0));
  report(elapsed_s(t0) < 600.0, "C5 runtime", buf);
}

void criterion_6_oracle_suites() {
  // Conditional delay law against direct simulation of the block assignment.
  {
    bool all_ok = true;
    int entries = 0;
    double worst_z = 0.0;
    const int trials = 1000000;
    for (int n = 1; n <= 6; ++n)
      for (int k0 = 0; k0 <= 12; ++k0) {
        const auto freq =
            oracle::simulate_block_assignment(k0, n, trials, 0x5eedULL + 977ULL * n + k0);
        for (int l = 0; l < int(freq.size()); ++l) {
          const double p = conditional_delay_prob(l, k0, n);
          if (p == 0.0 || p == 1.0) {  // deterministic outcomes must be exact
            all_ok &= freq[l] == p;
            continue;
          }
          ++entries;
          const double sigma = std::sqrt(p * (1.0 - p) / trials);
          const double z = std::abs(freq[l] - p) / sigma;
          worst_z = std::max(worst_z, z);
          all_ok &= z <= 3.0;
        }
      }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d nonzero entries (k0<=12, n<=6, 1e6 trials), worst |z| = %.2f",
                  entries, worst_z);
    report(all_ok, "C6 conditional delay law vs assignment simulation (3 sigma)", buf);
  }

  // Single-block occupancy against exhaustive enumeration, exact in integers.
  {
    bool all_ok = true;
    for (int n = 2; n <= 8; ++n)
      for (int k = 1; k < n; ++k) {
        const auto enumd = oracle::enumerate_sequential_draws(k, n);
        std::int64_t on_sc0 = 0;
        for (int m = 1; m <= k; ++m) {
          on_sc0 += enumd.on_sc0_by_position[m - 1];
          const double expected =
              double(enumd.on_sc0_by_position[m - 1]) / double(enumd.total_sequences);
          all_ok &= std::abs(sequential_sc_assignment_prob(k, n, m) - expected) <= 1e-12;
        }
        // sum_m Pr = k/n exactly: n * count == k * total in integers.
        all_ok &= std::int64_t(n) * on_sc0 == std::int64_t(k) * enumd.total_sequences;
        all_ok &= sc_occupancy_prob(k, n) == double(k) / n;
      }
    report(all_ok, "C6 single-block occupancy vs exhaustive enumeration (exact)",
           "all k < n <= 8, integer identity n*count == k*total");
  }

  // Interference integral against the arctan closed form.
  {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double theta = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
      const double exact = std::sqrt(theta) * std::atan(std::sqrt(theta));
      worst = std::max(worst, std::abs(rho_by_quadrature(theta, 4.0) - exact));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst |error| = %.2e over 50 log-spaced points", worst);
    report(worst <= 1e-9, "C6 interference integral quadrature vs closed form", buf);
  }

  // Normalization of every PMF the library produces.
  {
    bool all_ok = true;
    for (double tau : {0.05, 0.3, 1.0, 4.0, 20.0}) {
      for (const DiscretePmf& p :
           {cell_load_pmf(tau), tagged_cell_load_pmf(tau),
            delay_pmf({tau, 3.0, 1.0, 4, Scheme::kFdmaTdma}),
            delay_pmf({tau, 3.0, 1.0, 4, Scheme::kTdma})}) {
        double sum = p.tail_mass();
        for (double v : p.probs()) sum += v;
        all_ok &= std::abs(sum - 1.0) <= 1e-9;
      }
      for (int n = 1; n <= 6; ++n)
        for (int k0 = 0; k0 <= 12; ++k0) {
          double s = 0.0;
          for (int l = 0; l <= k0 + 1; ++l) s += conditional_delay_prob(l, k0, n);
          all_ok &= std::abs(s - 1.0) <= 1e-9;
        }
    }
    report(all_ok, "C6 PMF normalization with certified tails",
           "load, tagged-load, delay PMFs and conditional terms, |sum+tail-1| <= 1e-9");
  }

  // Scheduler activity on one subchannel with loads drawn from the load law.
  {
    bool all_ok = true;
    double worst_z = 0.0;
    const int trials = 400000;
    for (Scheme s : {Scheme::kTdma, Scheme::kFdmaTdma})
      for (double tau : {0.3, 1.0, 3.0})
        for (int n : {1, 2, 5, 8}) {
          const DiscretePmf loads = cell_load_pmf(tau);
          std::vector<double> cdf(loads.size());
          double acc = 0.0;
          for (std::size_t k = 0; k < loads.size(); ++k) {
            acc += loads[k];
            cdf[k] = acc;
          }
          Rng rng(0xacceULL, std::uint64_t(n * 4096 + int(tau * 100)),
                  s == Scheme::kTdma ? 1 : 2);
          std::int64_t active = 0;
          for (int t = 0; t < trials; ++t) {
            const double u = rng.uniform01();
            const int load = int(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            active += schedule_occupancy(s, load, n, rng)[0];
          }
          const double expected = activity_probability({tau, 3.0, 1.0, n, s});
          const double sigma = std::sqrt(expected * (1.0 - expected) / trials);
          const double z = std::abs(double(active) / trials - expected) / sigma;
          worst_z = std::max(worst_z, z);
          all_ok &= z <= 3.0;
        }
    char buf[120];
    std::snprintf(buf, sizeof buf, "24 scheme/tau/n combinations, worst |z| = %.2f", worst_z);
    report(all_ok, "C6 scheduler activity vs closed form (3 sigma)", buf);
  }
}

void criterion_7_monotonicity_and_divergence() {
  {
    bool ok = true;
    for (Scheme s : {Scheme::kTdma, Scheme::kFdmaTdma}) {
      double prev_f = 2.0, prev_p = 2.0;
      for (int n = 1; n <= 16; ++n) {
        const NetworkConfig c{1.0, 3.0, 1.0, n, s};
        const double f = sir_cdf(c)(1.0);
        const double p = activity_probability(c);
        ok &= f < prev_f && p < prev_p;
        prev_f = f;
        prev_p = p;
      }
    }
    report(ok, "C7 SIR outage and activity strictly decrease with partitioning",
           "n = 1..16, both schemes, tau = 1");
  }
  {
    bool ok = true;
    int worst_n = 0;
    for (Scheme s : {Scheme::kTdma, Scheme::kFdmaTdma})
      for (double tau : {0.1, 1.0, 10.0})
        for (double r0 : {0.05, 0.1, 0.3233}) {
          const DivergenceReport r = divergence_check({tau, 3.0, kTheta0Db6, 1, s}, r0, 1);
          ok &= r.requested && r.n_at_target > 0 && r.attained >= 0.99 && r.monotone_tail;
          worst_n = std::max(worst_n, r.n_at_target);
        }
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "outage reaches 0.99 at finite n for all 18 configs (largest n = %d)", worst_n);
    report(ok, "C7 over-partitioning drives the outage to one", buf);
  }
}

void criterion_8_reproducibility() {
  SimulateOptions opts;
  opts.config.lambda_a = opts.config.lambda_u = 1.0;
  opts.config.alpha = 3.0;
  opts.config.theta0 = 1.0;
  opts.config.n_subchannels = 5;
  opts.config.scheme = Scheme::kFdmaTdma;
  opts.config.n_drops = 20000;
  opts.config.seed = 7;
  opts.config.n_threads = 0;
  opts.r_start = 0.0;
  opts.r_step = 0.02;
  opts.r_stop = 1.0;

  const RunOutcome first = run_simulate(opts);
  const RunOutcome second = run_simulate(opts);
  const bool csv_same = first.table.to_csv() == second.table.to_csv();
  const bool json_same = first.table.to_json() == second.table.to_json();
  char buf[120];
  std::snprintf(buf, sizeof buf, "two consecutive runs, %zu bytes CSV compared byte-for-byte",
                first.table.to_csv().size());
  report(csv_same && json_same, "C8 identical seed reproduces identical tables", buf);

  SimulateOptions reseeded = opts;
  reseeded.config.seed = 8;
  const bool differs = run_simulate(reseeded).table.to_csv() != first.table.to_csv();
  report(differs, "C8 different seed changes the samples", "seeds 7 vs 8");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  std::printf("acceptance suite\n================\n");
  criterion_1_spot_values();
  criterion_2_rate_cdf_anchors();
  criterion_3_optimizer_anchors();
  criterion_4_density_bounds();
  criterion_6_oracle_suites();
  criterion_7_monotonicity_and_divergence();
  criterion_8_reproducibility();
  criterion_5_simulation_vs_analysis();  // heaviest last
  std::printf("================\n%d checks, %d failed, %.1f s total\n", g_checks, g_failures,
              elapsed_s(t0));
  return g_failures == 0 ? 0 : 1;
}

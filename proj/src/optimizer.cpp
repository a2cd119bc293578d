#include "udn/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>

#include "udn/analytics.hpp"

namespace udn {

namespace {

std::uint64_t bits_of(double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof u);
  return u;
}

// Repeated F_R(r0; tau, N) evaluations during a search hit the same branch
// thresholds theta = 2^(r0 N (L+1)) - 1 over and over (they do not depend on
// tau), so rho values are memoized per evaluator. Single-threaded use.
class RateOutageEvaluator {
 public:
  RateOutageEvaluator(Scheme scheme, double alpha, double theta0, double r0)
      : scheme_(scheme), alpha_(alpha), theta0_(theta0), r0_(r0) {}

  double outage(double tau, int n) {
    prepare_tau(tau);
    const double p = activity(tau, n);
    if (scheme_ == Scheme::kTdma) return mixture(*tagged_, p, n);
    fdma_delay_probs(n);
    double total = 0.0;
    for (double v : delay_scratch_) total += v;
    return mixture_over(delay_scratch_, total, p, n);
  }

 private:
  void prepare_tau(double tau) {
    if (tau_ && *tau_ == tau) return;
    tau_ = tau;
    tagged_ = tagged_cell_load_pmf(tau, 1e-12);
    tagged_total_ = 0.0;
    for (double v : tagged_->probs()) tagged_total_ += v;
    cell_exceedance_.clear();
  }

  // E[min(K, n)]/n via sum_{l<n} Pr{K > l}; the exceedance prefix is built
  // once per tau.
  double activity(double tau, int n) {
    if (scheme_ == Scheme::kTdma) return prob_cell_occupied(tau) / n;
    if (cell_exceedance_.empty()) {
      const DiscretePmf cell = cell_load_pmf(tau, 1e-13);
      cell_exceedance_.assign(cell.size() + 1, 0.0);
      double suffix = cell.tail_mass();
      for (std::size_t k = cell.size(); k-- > 0;) {
        cell_exceedance_[k + 1] = suffix;  // Pr{K > k}
        suffix += cell[k];
      }
      cell_exceedance_[0] = suffix;  // Pr{K > -1} = 1 up to rounding
    }
    double e = 0.0;
    for (int l = 0; l < n && l + 1 < int(cell_exceedance_.size()); ++l)
      e += cell_exceedance_[l + 1];
    return e / n;
  }

  void fdma_delay_probs(int n) {
    const int k0_max = int(tagged_->size()) - 1;
    const int l_max = (k0_max + 1) / n + 1;
    delay_scratch_.assign(l_max + 1, 0.0);
    for (int k0 = 0; k0 <= k0_max; ++k0) {
      const double pk = (*tagged_)[k0];
      const int lo = std::max(0, (k0 + 1) / n - 1);
      const int hi = std::min(l_max, (k0 + 1) / n + 1);
      for (int l = lo; l <= hi; ++l) delay_scratch_[l] += pk * conditional_delay_prob(l, k0, n);
    }
  }

  double mixture(const DiscretePmf& delays, double p, int n) {
    return mixture_over(delays.probs(), tagged_total_, p, n);
  }

  // sum_l Pr{L=l} F(r0 | l); once the branch exponent saturates, every later
  // term contributes its full mass, so the loop closes with the remainder.
  double mixture_over(std::span<const double> probs, double total_mass, double p, int n) {
    double value = 0.0, prefix = 0.0;
    for (std::size_t l = 0; l < probs.size(); ++l) {
      const double exponent = r0_ * n * double(l + 1);
      if (exponent >= 1024.0) {
        value += total_mass - prefix;
        return value;
      }
      if (probs[l] != 0.0) {
        const double theta = std::max(theta0_, std::exp2(exponent) - 1.0);
        value += probs[l] * (1.0 - 1.0 / (1.0 + p * rho_cached(theta)));
      }
      prefix += probs[l];
    }
    return value;
  }

  double rho_cached(double theta) {
    const auto [it, inserted] = rho_cache_.try_emplace(bits_of(theta), 0.0);
    if (inserted) it->second = rho(theta, alpha_);
    return it->second;
  }

  Scheme scheme_;
  double alpha_, theta0_, r0_;
  std::optional<double> tau_;
  std::optional<DiscretePmf> tagged_;
  double tagged_total_ = 0.0;
  std::vector<double> cell_exceedance_;
  std::vector<double> delay_scratch_;
  std::unordered_map<std::uint64_t, double> rho_cache_;
};

}  // namespace

int n_star_lower_bound(double theta0, double r0) {
  if (!(r0 > 0.0)) throw std::domain_error("n_star_lower_bound: r0 must be positive");
  if (!(theta0 >= 0.0)) throw std::domain_error("n_star_lower_bound: theta0 must be nonnegative");
  const double ratio = min_conditional_rate(theta0) / r0;
  // Nudge so exact integer ratios (r0 = rbar/k) are not floored down an ulp.
  return std::max(1, int(std::floor(ratio * (1.0 + 4e-12))));
}

DesignResult optimal_n(const DesignQuery& query, double tau) {
  query.validate();
  if (!(tau > 0.0)) throw std::domain_error("optimal_n: tau must be positive");
  RateOutageEvaluator eval(query.scheme, query.alpha, query.theta0, query.r0);
  DesignResult result;
  result.n_star_lb = n_star_lower_bound(query.theta0, query.r0);
  result.epsilon_warning = query.epsilon > 0.1;
  double best = std::numeric_limits<double>::infinity();
  result.objective_trace.reserve(query.n_max);
  for (int n = 1; n <= query.n_max; ++n) {
    const double f = eval.outage(tau, n);
    result.objective_trace.push_back({double(n), f});
    if (f < best) {
      best = f;
      result.n_star = n;
    }
  }
  result.achieved_outage = best;
  result.feasible = best <= query.epsilon;
  if (query.n_max >= 2) {
    const auto& t = result.objective_trace;
    result.tail_warning = t[t.size() - 1].outage <= t[t.size() - 2].outage;
  }
  return result;
}

DivergenceReport divergence_check(const NetworkConfig& config, double r0, int n_probe,
                                  double target) {
  config.validate();
  DivergenceReport report;
  if (!(r0 > 0.0)) return report;  // trivially empty: F_R(0+) is the SIR outage
  report.requested = true;
  RateOutageEvaluator eval(config.scheme, config.alpha, config.theta0, r0);
  for (long n = std::max(1, n_probe); n <= (1L << 40); n *= 2) {
    const double f = eval.outage(config.tau, int(std::min<long>(n, 1 << 30)));
    report.trace.push_back({double(n), f});
    if (f >= target) {
      report.n_at_target = int(n);
      report.attained = f;
      break;
    }
    report.attained = f;  // best seen if the probe ceiling is hit
  }
  // The outage may keep improving while extra subchannels still shorten
  // delays; the divergence claim is that past the probed minimum it only
  // climbs.
  std::size_t arg_min = 0;
  for (std::size_t i = 1; i < report.trace.size(); ++i)
    if (report.trace[i].outage < report.trace[arg_min].outage) arg_min = i;
  for (std::size_t i = arg_min + 1; i < report.trace.size(); ++i)
    if (report.trace[i].outage < report.trace[i - 1].outage - 1e-12)
      report.monotone_tail = false;
  return report;
}

double tau_min_upper_bound(const DesignQuery& query) {
  query.validate();
  if (query.scheme != Scheme::kFdmaTdma)
    throw std::invalid_argument(
        "tau_min_upper_bound: closed-form bound is stated for FDMA/TDMA only");
  const double rbar = min_conditional_rate(query.theta0);
  const double lead = (1.0 - query.epsilon) / query.epsilon;
  if (query.r0 <= rbar) {
    const int floor_ratio = std::max(1, n_star_lower_bound(query.theta0, query.r0));
    return lead * rho(query.theta0, query.alpha) / floor_ratio;
  }
  return lead * rho(std::exp2(query.r0) - 1.0, query.alpha);
}

double tau_min_asymptotic(const DesignQuery& query, AsymptoticRegime regime) {
  query.validate();
  if (query.scheme != Scheme::kFdmaTdma)
    throw std::invalid_argument(
        "tau_min_asymptotic: closed-form bound is stated for FDMA/TDMA only");
  const double lead = (1.0 - query.epsilon) / query.epsilon;
  if (regime == AsymptoticRegime::kSmallR0) {
    const double rbar = min_conditional_rate(query.theta0);
    if (!(rbar > 0.0))
      throw std::domain_error("tau_min_asymptotic: small-r0 form needs theta0 > 0");
    return lead * rho(query.theta0, query.alpha) * query.r0 / rbar;
  }
  return lead * 2.0 * std::numbers::pi * std::exp2(2.0 * query.r0 / query.alpha) /
         (query.alpha * std::sin(2.0 * std::numbers::pi / query.alpha));
}

namespace {

struct TauObjective {
  RateOutageEvaluator eval;
  int n_max;
  int last_argmin = 1;

  double operator()(double tau) {
    double best = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
      const double f = eval.outage(tau, n);
      if (f < best) {
        best = f;
        last_argmin = n;
      }
    }
    return best;
  }
};

}  // namespace

DesignResult tau_min_search(const DesignQuery& query) {
  query.validate();
  DesignResult result;
  result.n_star_lb = n_star_lower_bound(query.theta0, query.r0);
  result.epsilon_warning = query.epsilon > 0.1;
  if (query.scheme == Scheme::kFdmaTdma) result.tau_min_ub = tau_min_upper_bound(query);

  TauObjective objective{
      RateOutageEvaluator(query.scheme, query.alpha, query.theta0, query.r0), query.n_max};

  // The bisection leans on min_N F_R being nonincreasing in tau; every
  // evaluation is checked against the points seen so far.
  std::vector<ObjectivePoint> seen;
  auto checked = [&](double tau) {
    const double g = objective(tau);
    for (const auto& pt : seen) {
      const bool bad = (pt.parameter < tau && g > pt.outage + 1e-9) ||
                       (pt.parameter > tau && g < pt.outage - 1e-9);
      if (bad)
        throw std::runtime_error(
            "tau_min_search: objective is not monotone in tau (diagnostic abort)");
    }
    seen.push_back({tau, g});
    return g;
  };

  const double g_hi = checked(query.tau_hi);
  if (g_hi > query.epsilon) {
    result.feasible = false;
    result.achieved_outage = g_hi;
    result.objective_trace = std::move(seen);
    return result;
  }
  double lo = query.tau_lo, hi = query.tau_hi;
  const double g_lo = checked(lo);
  if (g_lo <= query.epsilon) {
    // Already feasible at the bracket bottom; the requested range cannot
    // localize tau_min further.
    hi = lo;
  }
  while (hi > lo * (1.0 + 1e-3)) {
    const double mid = std::sqrt(lo * hi);
    if (checked(mid) <= query.epsilon)
      hi = mid;
    else
      lo = mid;
  }
  result.tau_min = hi;
  result.achieved_outage = objective(hi);
  result.n_at_tau_min = objective.last_argmin;
  std::sort(seen.begin(), seen.end(),
            [](const ObjectivePoint& a, const ObjectivePoint& b) { return a.parameter < b.parameter; });
  result.objective_trace = std::move(seen);
  return result;
}

}  // namespace udn

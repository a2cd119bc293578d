#include "udn/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "udn/quadrature.hpp"

namespace udn {

namespace {

constexpr double kCellShape = 3.5;  // fitted shape of the random-cell area model
constexpr int kMaxPmfTerms = 2'000'000;

// log Pr{K = k} for the gamma-mixture load PMF with shape exponent `shape`.
// The mixing base stays 3.5*tau for both the random (3.5) and tagged (4.5)
// cells; only the shape exponent changes.
double log_load_pmf(int k, double shape, double tau) {
  return shape * std::log(kCellShape) + std::lgamma(k + shape) +
         shape * std::log(tau) - std::lgamma(shape) - std::lgamma(k + 1.0) -
         (k + shape) * std::log1p(kCellShape * tau);
}

DiscretePmf truncated_load_pmf(double tau, double shape, double tol) {
  if (!(tau > 0.0)) throw std::domain_error("load pmf: tau must be positive");
  if (!(tol > 0.0) || tol > 1e-6)
    throw std::domain_error("load pmf: tail tolerance must lie in (0, 1e-6]");
  // Term ratios p_{k+1}/p_k = x (k+shape)/(k+1) with x = 1/(1+3.5 tau) are
  // decreasing in k, so once a ratio r falls below 1 the remaining tail is
  // bounded by the geometric sum p_k r/(1-r). That bound both stops the loop
  // and becomes the carried certificate; a partial-sum stopping criterion
  // would drown in accumulated rounding for long PMFs (small tau).
  const double x = 1.0 / (1.0 + kCellShape * tau);
  std::vector<double> probs;
  for (int k = 0;; ++k) {
    if (k >= kMaxPmfTerms)
      throw std::runtime_error("load pmf: truncation did not converge");
    const double p = std::exp(log_load_pmf(k, shape, tau));
    probs.push_back(p);
    const double r = x * (k + shape) / (k + 1);  // p_{k+1}/p_k; decreasing in k
    if (r < 1.0) {
      const double tail_bound = p * r / (1.0 - r);
      if (tail_bound < tol) return DiscretePmf(std::move(probs), tail_bound);
    }
  }
}

}  // namespace

DiscretePmf cell_load_pmf(double tau, double tol) {
  return truncated_load_pmf(tau, kCellShape, tol);
}

DiscretePmf tagged_cell_load_pmf(double tau, double tol) {
  return truncated_load_pmf(tau, kCellShape + 1.0, tol);
}

double prob_cell_occupied(double tau) {
  if (!(tau > 0.0)) throw std::domain_error("prob_cell_occupied: tau must be positive");
  // 1 - (3.5 tau / (1 + 3.5 tau))^3.5
  return -std::expm1(kCellShape * (std::log(kCellShape * tau) - std::log1p(kCellShape * tau)));
}

double activity_probability(const NetworkConfig& config) {
  config.validate();
  const int n = config.n_subchannels;
  if (config.scheme == Scheme::kTdma)
    return prob_cell_occupied(config.tau) / n;
  const DiscretePmf pmf = cell_load_pmf(config.tau, 1e-13);
  double expected_active = 0.0;
  for (std::size_t k = 1; k < pmf.size(); ++k)
    expected_active += std::min<double>(double(k), n) * pmf[k];
  // The truncated tail sits at loads >= pmf.size(); bound its min(K, N).
  expected_active += std::min<double>(double(pmf.size()), n) * pmf.tail_mass();
  return expected_active / n;
}

double rho_asymptotic_constant(double alpha) {
  if (!(alpha > 2.0)) throw std::domain_error("rho: alpha must exceed 2");
  return (2.0 * std::numbers::pi / alpha) / std::sin(2.0 * std::numbers::pi / alpha);
}

namespace {

// Tail expansion for theta^(-2/alpha) = a << 1:
//   rho(theta) = (1/a) * (C_alpha - int_0^a du/(1+u^(alpha/2)))
// with the inner integral expanded as an alternating power series.
double rho_tail_series(double a, double alpha) {
  const double c = rho_asymptotic_constant(alpha);
  double head = 0.0;
  double sign = 1.0;
  for (int j = 0; j < 64; ++j) {
    const double e = j * alpha / 2.0 + 1.0;
    const double term = sign * std::pow(a, e) / e;
    head += term;
    if (std::abs(term) < 1e-18) break;
    sign = -sign;
  }
  return (c - head) / a;
}

}  // namespace

double rho_by_quadrature(double theta, double alpha, double abs_tol) {
  if (!(alpha > 2.0)) throw std::domain_error("rho: alpha must exceed 2 (integral diverges)");
  if (!(theta >= 0.0)) throw std::domain_error("rho: theta must be nonnegative");
  if (theta == 0.0) return 0.0;
  // Substituting u = theta^(-2/alpha) * s^(-2/(alpha-2)) turns the defining
  // integral into a bounded smooth integrand on [0, 1]:
  //   rho(theta) = 2/(alpha-2) * int_0^1 theta / (1 + theta s^(alpha/(alpha-2))) ds
  const double q = alpha / (alpha - 2.0);
  return 2.0 / (alpha - 2.0) *
         adaptive_simpson(
             [theta, q](double s) { return theta / (1.0 + theta * std::pow(s, q)); },
             0.0, 1.0, abs_tol);
}

double rho(double theta, double alpha) {
  if (!(alpha > 2.0)) throw std::domain_error("rho: alpha must exceed 2 (integral diverges)");
  if (!(theta >= 0.0)) throw std::domain_error("rho: theta must be nonnegative");
  if (theta == 0.0) return 0.0;
  if (std::isinf(theta)) return std::numeric_limits<double>::infinity();
  if (alpha == 4.0) {
    const double s = std::sqrt(theta);
    return s * std::atan(s);
  }
  const double a = std::pow(theta, -2.0 / alpha);
  if (a < 1e-2) return rho_tail_series(a, alpha);
  return rho_by_quadrature(theta, alpha);
}

SirCdf sir_cdf(const NetworkConfig& config) {
  return SirCdf{activity_probability(config), config.alpha};
}

double conditional_delay_prob(int l, int k0, int n) {
  if (l < 0 || k0 < 0) throw std::domain_error("conditional_delay_prob: negative argument");
  if (n < 1) throw std::domain_error("conditional_delay_prob: n must be >= 1");
  const double nn = n;
  if (l == 0) {
    if (k0 <= n - 1) return 1.0;
    if (k0 <= 2 * n - 2) return (2.0 * n - k0 - 1) / nn;
    return 0.0;
  }
  if (k0 <= l * n - 1) return 0.0;
  if (k0 <= (l + 1) * n - 1) return (k0 - l * nn + 1) / nn;
  if (k0 <= (l + 2) * n - 2) return ((l + 2) * nn - k0 - 1) / nn;
  return 0.0;
}

DiscretePmf delay_pmf(const NetworkConfig& config, double tol) {
  config.validate();
  DiscretePmf tagged = tagged_cell_load_pmf(config.tau, tol);
  if (config.scheme == Scheme::kTdma) return tagged;  // the whole cell time-shares
  const int n = config.n_subchannels;
  const int k0_max = int(tagged.size()) - 1;
  // Largest delay reachable from k0_max extra users: ceil((k0_max+1)/n) - 1 + 1.
  const int l_max = (k0_max + 1) / n + 1;
  std::vector<double> probs(l_max + 1, 0.0);
  for (int k0 = 0; k0 <= k0_max; ++k0) {
    const double pk = tagged[k0];
    // Nonzero conditional terms cluster at l ~ (k0+1)/n; sweeping the short
    // window keeps the mixture O(k0_max) overall.
    const int lo = std::max(0, (k0 + 1) / n - 1);
    const int hi = std::min(l_max, (k0 + 1) / n + 1);
    for (int l = lo; l <= hi; ++l) probs[l] += pk * conditional_delay_prob(l, k0, n);
  }
  while (probs.size() > 1 && probs.back() == 0.0) probs.pop_back();
  return DiscretePmf(std::move(probs), tagged.tail_mass());
}

double sequential_sc_assignment_prob(int k, int n, int m) {
  if (n < 1) throw std::domain_error("assignment prob: n must be >= 1");
  if (k < 1 || k > n)
    throw std::domain_error("assignment prob: requires 1 <= k <= n (single block)");
  if (m < 1 || m > k) throw std::domain_error("assignment prob: m out of [1, k]");
  double value = 1.0 / (n - (m - 1));
  for (int r = 1; r <= m - 1; ++r) value *= 1.0 - 1.0 / (n - (r - 1));
  return value;
}

double sc_occupancy_prob(int k, int n) {
  if (n < 1) throw std::domain_error("occupancy prob: n must be >= 1");
  if (k < 0) throw std::domain_error("occupancy prob: negative load");
  if (k == 0) return 0.0;
  if (k >= n) return 1.0;
  return double(k) / n;
}

double rate_cdf_conditional(const NetworkConfig& config, int delay, double r) {
  config.validate();
  if (delay < 0) throw std::domain_error("rate_cdf_conditional: negative delay");
  if (!(r >= 0.0)) throw std::domain_error("rate_cdf_conditional: negative rate");
  const SirCdf sir = sir_cdf(config);
  const double exponent = r * config.n_subchannels * (delay + 1);
  if (exponent >= 1024.0) return 1.0;  // 2^exponent overflows; CDF saturates
  const double theta = std::exp2(exponent) - 1.0;
  return sir(std::max(config.theta0, theta));
}

RateCdfValue RateCdf::eval(double r) const {
  if (!(r >= 0.0)) throw std::domain_error("RateCdf: negative rate");
  const int n = config_.n_subchannels;
  double value = 0.0;
  const auto probs = delay_.probs();
  for (std::size_t l = 0; l < probs.size(); ++l) {
    if (probs[l] == 0.0) continue;
    const double exponent = r * n * double(l + 1);
    double f;
    if (exponent >= 1024.0) {
      f = 1.0;
    } else {
      const double theta = std::exp2(exponent) - 1.0;
      f = sir_(std::max(config_.theta0, theta));
    }
    value += probs[l] * f;
  }
  return RateCdfValue{value, value + delay_.tail_mass()};
}

RateCdf rate_cdf(const NetworkConfig& config, double tol) {
  config.validate();
  return RateCdf(config, delay_pmf(config, tol), sir_cdf(config));
}

}  // namespace udn

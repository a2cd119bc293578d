#pragma once

#include <cmath>

#include "udn/config.hpp"
#include "udn/pmf.hpp"

namespace udn {

// ---------------------------------------------------------------------------
// Cell-load distributions
// ---------------------------------------------------------------------------

/// PMF of the number K of users associated with a randomly chosen access
/// point, for density ratio tau = lambda_a / lambda_u. Gamma ratios are
/// evaluated in the log domain, and the series is truncated adaptively at
/// the smallest length whose residual tail mass is below tol. Mean -> 1/tau.
DiscretePmf cell_load_pmf(double tau, double tol = 1e-12);

/// PMF of the number K0 of users sharing the reference user's serving access
/// point, in addition to the reference user itself. The serving cell is
/// stochastically larger than a random cell (its area covers the reference
/// position), which shifts the shape exponent from 3.5 to 4.5.
/// Mean -> 4.5 / (3.5 tau).
DiscretePmf tagged_cell_load_pmf(double tau, double tol = 1e-12);

/// Pr{K > 0} for a random cell, in closed form (no truncation involved).
double prob_cell_occupied(double tau);

// ---------------------------------------------------------------------------
// Activity probability and SIR distribution
// ---------------------------------------------------------------------------

/// Probability that a given access point transmits on a given subchannel in
/// a slot: Pr{K>0}/N under TDMA, E[min(K,N)]/N under FDMA/TDMA.
double activity_probability(const NetworkConfig& config);

/// Interference scaling factor
///   rho(theta) = theta^(2/alpha) * int_{theta^(-2/alpha)}^inf du/(1+u^(alpha/2)).
/// Dispatches to the arctan closed form at alpha == 4, to a convergent tail
/// series for very large theta, and otherwise to adaptive quadrature on an
/// equivalent bounded, smooth form (absolute tolerance 1e-10).
double rho(double theta, double alpha);

/// Quadrature-only evaluation of rho (no closed-form or series shortcuts);
/// kept separate so the integration path stays independently testable.
double rho_by_quadrature(double theta, double alpha, double abs_tol = 1e-10);

/// Limit constant rho(theta)/theta^(2/alpha) -> 2*pi / (alpha*sin(2*pi/alpha)).
double rho_asymptotic_constant(double alpha);

/// SIR distribution at the reference user under i.i.d. interferer activity p:
/// F(theta) = 1 - 1/(1 + p * rho(theta)).
struct SirCdf {
  double activity_probability = 1.0;  // in (0, 1]
  double alpha = 3.0;

  double operator()(double theta) const {
    if (!(theta > 0.0)) return 0.0;
    const double r = rho(theta, alpha);
    if (std::isinf(r)) return 1.0;
    return 1.0 - 1.0 / (1.0 + activity_probability * r);
  }
};

SirCdf sir_cdf(const NetworkConfig& config);

// ---------------------------------------------------------------------------
// Delay distribution
// ---------------------------------------------------------------------------

/// Pr{l other users share the reference user's subchannel | K0 extra cell
/// users} under the FDMA/TDMA block assignment, with the reference user
/// heading the first block. Piecewise-linear in K0 with breakpoints at
/// multiples of n.
double conditional_delay_prob(int l, int k0, int n);

/// PMF of the reference user's delay L (extra slots between consecutive
/// services). TDMA: L = K0. FDMA/TDMA: mixture of conditional_delay_prob
/// over the tagged cell-load PMF.
DiscretePmf delay_pmf(const NetworkConfig& config, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Sequential subchannel assignment (single block, load below N)
// ---------------------------------------------------------------------------

/// Probability that the m-th of k users draws one fixed subchannel when users
/// pick sequentially without replacement from n subchannels (1 <= m <= k < n).
/// Evaluated as the literal product form; telescopes to 1/n.
double sequential_sc_assignment_prob(int k, int n, int m);

/// Probability that a cell with load k occupies one fixed subchannel:
/// 0 for k == 0, k/n for 0 < k < n, and 1 for k >= n.
double sc_occupancy_prob(int k, int n);

// ---------------------------------------------------------------------------
// Rate distribution
// ---------------------------------------------------------------------------

/// Minimum conditional rate log2(1 + theta0): the per-slot rate floor of a
/// user that passes the SIR threshold with N = 1 and an empty cell.
inline double min_conditional_rate(double theta0) { return std::log2(1.0 + theta0); }

/// CDF of the user rate conditioned on delay L. Flat at F_SIR(theta0) up to
/// the breakpoint r = log2(1+theta0)/(N(L+1)), then F_SIR(2^(rN(L+1)) - 1);
/// the two branches agree at the breakpoint.
double rate_cdf_conditional(const NetworkConfig& config, int delay, double r);

struct RateCdfValue {
  double value = 0.0;        // mixture over the truncated delay PMF
  double upper_bound = 0.0;  // value + delay tail mass (worst-case assignment)
};

/// Evaluable rate CDF: mixture of the conditional CDF over the delay PMF.
/// Immutable after construction; safe to evaluate concurrently.
class RateCdf {
 public:
  RateCdf(NetworkConfig config, DiscretePmf delay, SirCdf sir)
      : config_(config),
        delay_(std::move(delay)),
        sir_(sir),
        r_theta0_(min_conditional_rate(config.theta0)) {}

  RateCdfValue eval(double r) const;
  double operator()(double r) const { return eval(r).value; }

  const NetworkConfig& config() const { return config_; }
  const DiscretePmf& delay() const { return delay_; }
  const SirCdf& sir() const { return sir_; }
  double min_rate_at_threshold() const { return r_theta0_; }

 private:
  NetworkConfig config_;
  DiscretePmf delay_;
  SirCdf sir_;
  double r_theta0_;
};

RateCdf rate_cdf(const NetworkConfig& config, double tol = 1e-12);

}  // namespace udn

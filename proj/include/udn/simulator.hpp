#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "udn/config.hpp"
#include "udn/rng.hpp"

namespace udn {

/// Monte Carlo inputs. Unlike NetworkConfig, absolute densities matter here
/// because the observation window is a physical disk.
struct SimConfig {
  double lambda_a = 1.0;      // access points per unit area
  double lambda_u = 1.0;      // users per unit area
  double window_radius = 0.0; // observation disk radius; 0 = auto-size
  double alpha = 3.0;
  double theta0 = 1.0;        // linear
  int n_subchannels = 1;
  Scheme scheme = Scheme::kTdma;
  int n_drops = 10000;
  std::uint64_t seed = 1;
  double bias_budget = 0.01;  // allowed truncated-interference fraction
  int n_threads = 0;          // 0 = hardware concurrency

  double resolved_radius() const;
  void validate() const;
};

/// Fraction of the mean interference contributed by access points beyond
/// `radius`, for a probe at the window center served by its nearest point.
double interference_truncation_fraction(double radius, double lambda_a, double alpha);

/// Smallest radius keeping the truncation fraction within `bias_budget`
/// while holding at least `min_expected_aps` points in expectation.
double default_window_radius(double lambda_a, double alpha, double bias_budget = 0.01,
                             double min_expected_aps = 500.0);

struct Vec2 {
  double x = 0.0, y = 0.0;
};

/// One sampled planar realization with the reference user pinned at the
/// origin. `loads` counts sampled users per access point; the reference user
/// itself is not included in any load.
struct Deployment {
  std::vector<Vec2> aps;
  std::vector<Vec2> ues;
  std::vector<std::int32_t> ue_to_ap;   // nearest-AP association per user
  std::vector<std::int32_t> loads;      // per-AP user counts
  std::int32_t serving_ap = -1;         // nearest AP to the origin
  double serving_distance = 0.0;
  int resamples = 0;                    // empty-AP / zero-distance rejections
};

Deployment sample_deployment(const SimConfig& config, Rng& rng);

/// Scheduling outcome for the reference user's own cell in one slot where it
/// is served: its subchannel and delay (number of co-users on that
/// subchannel). k0 is the number of other users in the cell. The reference
/// user heads its cell's assignment order, which realizes the conditional
/// delay law the closed-form analysis uses.
struct CellSchedule {
  int subchannel = 0;
  int delay = 0;
};

CellSchedule schedule_typical_cell(Scheme scheme, int k0, int n, Rng& rng);

/// Per-subchannel occupancy flags of one interfering cell with `load` users,
/// for one slot. Under TDMA exactly one subchannel is active when load > 0;
/// under FDMA/TDMA every occupied subchannel (min(load, n) of them) is.
std::vector<std::uint8_t> schedule_occupancy(Scheme scheme, int load, int n, Rng& rng);

/// Pure SIR arithmetic, exposed for direct testing: serving power over the
/// summed interference of the given components. Empty interference yields
/// +infinity.
double sir_from_components(double serving_fade, double serving_distance, double alpha,
                           std::span<const double> interferer_fades,
                           std::span<const double> interferer_distances);

/// One slot at the reference user: scheduling of its own cell, independent
/// activity and fading draws for every other in-window cell, and the
/// resulting SIR / delay / rate sample.
struct Snapshot {
  double sir = 0.0;          // +inf when no interferer is active on the subchannel
  int delay = 0;
  double rate = 0.0;         // 0 on SIR outage; +inf on infinite SIR
  int subchannel = 0;
  int active_interferers = 0;
};

Snapshot sample_snapshot(const SimConfig& config, const Deployment& dep, Rng& rng);

/// Empirical CDF over a sample set, with the distribution-free 95% band.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double x) const;
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted_samples() const { return sorted_; }
  double dkw_epsilon(double confidence = 0.95) const;

 private:
  std::vector<double> sorted_;
};

/// Largest deviation between the empirical CDF and a reference CDF. Sample
/// ties are grouped so distributions with atoms (the rate CDF has one at 0)
/// are compared correctly: at each distinct value the right limit uses the
/// full tied count and the left limit uses the count before the group,
/// against the reference evaluated just left of the value. The reference
/// must be callable slightly below the smallest sample.
template <typename F>
double ks_distance(const EmpiricalCdf& ecdf, F&& reference) {
  const auto& xs = ecdf.sorted_samples();
  const double n = double(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double at = reference(xs[i]);
    const double before = reference(std::nextafter(xs[i], -1e308));
    d = std::max(d, std::abs(double(j) / n - at));
    d = std::max(d, std::abs(double(i) / n - before));
    i = j;
  }
  return d;
}

/// Joint tally of (SIR outage, delay) pairs. The analytical rate CDF treats
/// the two as independent; the tally measures how far the sampled joint is
/// from the product of its marginals.
struct JointAudit {
  static constexpr int kDelayCap = 24;
  std::vector<std::int64_t> counts = std::vector<std::int64_t>(2 * (kDelayCap + 1), 0);
  std::int64_t total = 0;

  void add(bool outage, int delay);
  void merge(const JointAudit& other);
  /// Total-variation distance between the joint and the product of marginals.
  double dependence_gap() const;
};

struct SimulationResult {
  SimConfig config;                 // with the resolved radius filled in
  std::vector<double> rates;        // one sample per drop, drop order
  std::vector<double> sirs;
  std::vector<std::int32_t> delays;
  EmpiricalCdf rate_cdf;
  JointAudit audit;
  std::int64_t infinite_sir_drops = 0;
  std::int64_t resamples = 0;
  double mean_active_interferers = 0.0;
};

/// One rate sample per drop at the reference user, evaluated in a slot where
/// it is scheduled. Drops run concurrently on independent RNG streams and
/// merge deterministically.
SimulationResult empirical_rate_cdf(const SimConfig& config);

/// Shared-deployment variant: samples each deployment once and evaluates all
/// (scheme, N) variants on it with independent scheduling/fading substreams.
/// Per-variant marginals are identical to independent runs; only cross-
/// variant correlation (which nothing consumes) differs.
std::vector<SimulationResult> empirical_rate_cdf_batch(
    const SimConfig& base, std::span<const std::pair<Scheme, int>> variants);

}  // namespace udn

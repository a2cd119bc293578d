#include "udn/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace udn {

double interference_truncation_fraction(double radius, double lambda_a, double alpha) {
  if (!(radius > 0.0) || !(lambda_a > 0.0) || !(alpha > 2.0))
    throw std::domain_error("truncation fraction: invalid parameters");
  if (alpha < 3.9) {
    // E[I beyond R] / E[I total] = R^(2-alpha) / E[r0^(2-alpha)], with the
    // serving-distance moment E[r0^s] = (pi lambda)^(-s/2) Gamma(s/2 + 1).
    const double s = 2.0 - alpha;
    const double moment = std::pow(std::numbers::pi * lambda_a, -s / 2.0) *
                          std::tgamma(s / 2.0 + 1.0);
    return std::pow(radius, s) / moment;
  }
  // Near alpha = 4 the mean interference is dominated by arbitrarily close
  // serving distances and the moment above blows up; fall back to the
  // conditional fraction at the median serving distance.
  const double r_median = std::sqrt(std::numbers::ln2 / (std::numbers::pi * lambda_a));
  return std::pow(radius / r_median, 2.0 - alpha);
}

double default_window_radius(double lambda_a, double alpha, double bias_budget,
                             double min_expected_aps) {
  const double r_count = std::sqrt(min_expected_aps / (std::numbers::pi * lambda_a));
  // interference_truncation_fraction is strictly decreasing in the radius;
  // invert it by bisection from the count-based floor.
  double lo = r_count;
  if (interference_truncation_fraction(lo, lambda_a, alpha) <= bias_budget) return lo;
  double hi = lo;
  while (interference_truncation_fraction(hi, lambda_a, alpha) > bias_budget) hi *= 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (interference_truncation_fraction(mid, lambda_a, alpha) > bias_budget ? lo : hi) = mid;
  }
  return hi;
}

double SimConfig::resolved_radius() const {
  return window_radius > 0.0 ? window_radius
                             : default_window_radius(lambda_a, alpha, bias_budget);
}

void SimConfig::validate() const {
  if (!(lambda_a > 0.0)) throw std::domain_error("SimConfig: lambda_a must be positive");
  if (!(lambda_u > 0.0)) throw std::domain_error("SimConfig: lambda_u must be positive");
  if (!(alpha > 2.0)) throw std::domain_error("SimConfig: alpha must exceed 2");
  if (!(theta0 >= 0.0)) throw std::domain_error("SimConfig: theta0 must be nonnegative");
  if (n_subchannels < 1) throw std::domain_error("SimConfig: n_subchannels must be >= 1");
  if (n_drops < 1) throw std::domain_error("SimConfig: n_drops must be >= 1");
  if (!(bias_budget > 0.0)) throw std::domain_error("SimConfig: bias budget must be positive");
  const double frac = interference_truncation_fraction(resolved_radius(), lambda_a, alpha);
  if (frac > bias_budget * (1.0 + 1e-9))
    throw std::domain_error(
        "SimConfig: window radius keeps " + std::to_string(frac) +
        " of the mean interference outside the window, above the budget of " +
        std::to_string(bias_budget) + "; enlarge window_radius");
}

namespace {

// Uniform point in the disk of the given radius (rejection from the square;
// cheaper than the polar transform in this hot path).
Vec2 uniform_in_disk(double radius, Rng& rng) {
  for (;;) {
    const double x = radius * (2.0 * rng.uniform01() - 1.0);
    const double y = radius * (2.0 * rng.uniform01() - 1.0);
    if (x * x + y * y <= radius * radius) return {x, y};
  }
}

// Bucketed uniform grid for nearest-neighbor queries over the access points.
class PointGrid {
 public:
  PointGrid(const std::vector<Vec2>& pts, double extent, double cell)
      : pts_(pts), extent_(extent), cell_(cell) {
    n_ = std::max(1, int(std::ceil(2.0 * extent_ / cell_)));
    cell_ = 2.0 * extent_ / n_;  // snap so the grid covers [-extent, extent] exactly
    counts_.assign(std::size_t(n_) * n_ + 1, 0);
    for (const auto& p : pts_) ++counts_[cell_index(p) + 1];
    std::partial_sum(counts_.begin(), counts_.end(), counts_.begin());
    order_.resize(pts_.size());
    std::vector<std::uint32_t> cursor(counts_.begin(), counts_.end() - 1);
    for (std::uint32_t i = 0; i < pts_.size(); ++i) order_[cursor[cell_index(pts_[i])]++] = i;
  }

  // Index of the nearest stored point and its squared distance.
  std::pair<std::int32_t, double> nearest(const Vec2& q) const {
    const int cx = coord(q.x), cy = coord(q.y);
    std::int32_t best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    const int ring_max = 2 * n_;
    for (int ring = 0; ring <= ring_max; ++ring) {
      // Cells in Chebyshev ring `ring` are at least (ring-1)*cell away.
      if (best >= 0) {
        const double safe = double(ring - 1) * cell_;
        if (safe > 0.0 && safe * safe >= best_d2) break;
      }
      const int x0 = cx - ring, x1 = cx + ring, y0 = cy - ring, y1 = cy + ring;
      for (int y = y0; y <= y1; ++y) {
        if (y < 0 || y >= n_) continue;
        const bool edge_row = (y == y0 || y == y1);
        const int step = edge_row ? 1 : (x1 - x0 == 0 ? 1 : x1 - x0);
        for (int x = x0; x <= x1; x += step) {
          if (x < 0 || x >= n_) continue;
          const std::size_t c = std::size_t(y) * n_ + x;
          for (std::uint32_t j = counts_[c]; j < counts_[c + 1]; ++j) {
            const Vec2& p = pts_[order_[j]];
            const double dx = p.x - q.x, dy = p.y - q.y;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_d2) {
              best_d2 = d2;
              best = std::int32_t(order_[j]);
            }
          }
        }
      }
    }
    return {best, best_d2};
  }

 private:
  int coord(double v) const {
    return std::clamp(int((v + extent_) / cell_), 0, n_ - 1);
  }
  std::size_t cell_index(const Vec2& p) const {
    return std::size_t(coord(p.y)) * n_ + coord(p.x);
  }

  const std::vector<Vec2>& pts_;
  double extent_, cell_;
  int n_ = 1;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint32_t> order_;
};

}  // namespace

// Cells near the window edge would lose the users that fall just outside it,
// deflating their loads and with them the sampled interference. Both point
// processes are therefore drawn on a padded disk; the pad is wide enough that
// every cell within the interference radius is complete with overwhelming
// probability, and interference is later summed only inside the unpadded
// radius.
double association_pad(double lambda_a) { return 3.0 / std::sqrt(lambda_a); }

Deployment sample_deployment(const SimConfig& config, Rng& rng) {
  const double radius = config.resolved_radius() + association_pad(config.lambda_a);
  const double area = std::numbers::pi * radius * radius;
  Deployment dep;
  for (;;) {
    const int n_ap = rng.poisson(config.lambda_a * area);
    if (n_ap == 0) {
      ++dep.resamples;  // vanishingly rare at required window sizes
      continue;
    }
    dep.aps.resize(n_ap);
    for (auto& p : dep.aps) p = uniform_in_disk(radius, rng);

    const PointGrid grid(dep.aps, radius,
                         std::max(1e-9, 1.0 / std::sqrt(config.lambda_a)));
    const auto [serving, d2] = grid.nearest(Vec2{0.0, 0.0});
    if (d2 < 1e-18) {  // reference user colocated with an AP; measure-zero guard
      ++dep.resamples;
      dep.aps.clear();
      continue;
    }
    dep.serving_ap = serving;
    dep.serving_distance = std::sqrt(d2);

    const int n_ue = rng.poisson(config.lambda_u * area);
    dep.ues.resize(n_ue);
    dep.ue_to_ap.resize(n_ue);
    dep.loads.assign(dep.aps.size(), 0);
    for (int i = 0; i < n_ue; ++i) {
      dep.ues[i] = uniform_in_disk(radius, rng);
      const auto [ap, ud2] = grid.nearest(dep.ues[i]);
      dep.ue_to_ap[i] = ap;
      ++dep.loads[ap];
    }
    return dep;
  }
}

CellSchedule schedule_typical_cell(Scheme scheme, int k0, int n, Rng& rng) {
  if (k0 < 0 || n < 1) throw std::domain_error("schedule_typical_cell: bad arguments");
  CellSchedule out;
  out.subchannel = int(rng.uniform_int(std::uint32_t(n)));
  if (scheme == Scheme::kTdma) {
    out.delay = k0;  // the whole cell shares one serving slot sequence
    return out;
  }
  // FDMA/TDMA: users are consumed in blocks of n, each block drawing distinct
  // subchannels. The reference user heads block 0, so its co-users on the
  // same subchannel come from the later blocks.
  const int total = k0 + 1;
  std::vector<int> scratch(n);
  int start = n;  // block 0 holds the reference user plus the next n-1 users
  int sharing = 0;
  while (start < total) {
    const int block = std::min(n, total - start);
    for (int i = 0; i < n; ++i) scratch[i] = i;
    for (int j = 0; j < block; ++j) {
      const int pick = j + int(rng.uniform_int(std::uint32_t(n - j)));
      std::swap(scratch[j], scratch[pick]);
      if (scratch[j] == out.subchannel) ++sharing;
    }
    start += block;
  }
  out.delay = sharing;
  return out;
}

std::vector<std::uint8_t> schedule_occupancy(Scheme scheme, int load, int n, Rng& rng) {
  if (load < 0 || n < 1) throw std::domain_error("schedule_occupancy: bad arguments");
  std::vector<std::uint8_t> occupied(n, 0);
  if (load == 0) return occupied;
  if (scheme == Scheme::kTdma) {
    occupied[rng.uniform_int(std::uint32_t(n))] = 1;
    return occupied;
  }
  std::vector<int> scratch(n);
  int start = 0;
  while (start < load) {
    const int block = std::min(n, load - start);
    for (int i = 0; i < n; ++i) scratch[i] = i;
    for (int j = 0; j < block; ++j) {
      const int pick = j + int(rng.uniform_int(std::uint32_t(n - j)));
      std::swap(scratch[j], scratch[pick]);
      occupied[scratch[j]] = 1;
    }
    start += block;
  }
  return occupied;
}

double sir_from_components(double serving_fade, double serving_distance, double alpha,
                           std::span<const double> interferer_fades,
                           std::span<const double> interferer_distances) {
  if (interferer_fades.size() != interferer_distances.size())
    throw std::invalid_argument("sir_from_components: mismatched spans");
  double interference = 0.0;
  for (std::size_t i = 0; i < interferer_fades.size(); ++i)
    interference += interferer_fades[i] * std::pow(interferer_distances[i], -alpha);
  const double signal = serving_fade * std::pow(serving_distance, -alpha);
  if (interference == 0.0) return std::numeric_limits<double>::infinity();
  return signal / interference;
}

Snapshot sample_snapshot(const SimConfig& config, const Deployment& dep, Rng& rng) {
  Snapshot snap;
  const int n = config.n_subchannels;
  const int k0 = dep.loads[dep.serving_ap];
  const CellSchedule cell = schedule_typical_cell(config.scheme, k0, n, rng);
  snap.subchannel = cell.subchannel;
  snap.delay = cell.delay;

  const double g0 = rng.exponential();
  const double radius2 = config.resolved_radius() * config.resolved_radius();
  double interference = 0.0;
  for (std::size_t i = 0; i < dep.aps.size(); ++i) {
    if (std::int32_t(i) == dep.serving_ap) continue;
    const int load = dep.loads[i];
    if (load == 0) continue;
    // Pad-annulus cells exist only to keep in-window loads unbiased.
    if (dep.aps[i].x * dep.aps[i].x + dep.aps[i].y * dep.aps[i].y > radius2) continue;
    // Occupancy of the reference subchannel in this slot. TDMA cells light
    // one uniformly chosen subchannel; FDMA/TDMA cells light every occupied
    // one, a uniformly random min(load, n)-subset.
    bool active;
    if (config.scheme == Scheme::kTdma) {
      active = rng.uniform_int(std::uint32_t(n)) == std::uint32_t(cell.subchannel);
    } else if (load >= n) {
      active = true;
    } else {
      active = rng.uniform01() * n < double(load);
    }
    if (!active) continue;
    ++snap.active_interferers;
    const double dx = dep.aps[i].x, dy = dep.aps[i].y;
    interference += rng.exponential() * std::pow(dx * dx + dy * dy, -0.5 * config.alpha);
  }

  const double signal = g0 * std::pow(dep.serving_distance, -config.alpha);
  snap.sir = interference == 0.0 ? std::numeric_limits<double>::infinity()
                                 : signal / interference;
  if (snap.sir >= config.theta0) {
    snap.rate = std::isinf(snap.sir)
                    ? std::numeric_limits<double>::infinity()
                    : std::log2(1.0 + snap.sir) / (double(n) * (cell.delay + 1));
  }
  return snap;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return double(it - sorted_.begin()) / double(sorted_.size());
}

double EmpiricalCdf::dkw_epsilon(double confidence) const {
  if (sorted_.empty()) return 1.0;
  const double eps = std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * double(sorted_.size())));
  return std::min(1.0, eps);
}

void JointAudit::add(bool outage, int delay) {
  const int d = std::min(delay, kDelayCap);
  ++counts[(outage ? 1 : 0) * (kDelayCap + 1) + d];
  ++total;
}

void JointAudit::merge(const JointAudit& other) {
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  total += other.total;
}

double JointAudit::dependence_gap() const {
  if (total == 0) return 0.0;
  const int w = kDelayCap + 1;
  double p_out = 0.0;
  std::vector<double> p_delay(w, 0.0);
  for (int o = 0; o < 2; ++o)
    for (int d = 0; d < w; ++d) {
      const double p = double(counts[o * w + d]) / double(total);
      if (o == 1) p_out += p;
      p_delay[d] += p;
    }
  double tv = 0.0;
  for (int o = 0; o < 2; ++o)
    for (int d = 0; d < w; ++d) {
      const double joint = double(counts[o * w + d]) / double(total);
      const double prod = (o == 1 ? p_out : 1.0 - p_out) * p_delay[d];
      tv += std::abs(joint - prod);
    }
  return 0.5 * tv;
}

namespace {

struct DropRecord {
  double rate = 0.0, sir = 0.0;
  std::int32_t delay = 0;
  std::int32_t actives = 0;
  std::int32_t resamples = 0;
  std::uint8_t outage = 0;
};

int resolve_threads(int requested, int drops) {
  int t = requested > 0 ? requested : int(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  return std::min(t, drops);
}

// Runs `body(drop, rng_factory)` over all drops on a static partition.
template <typename Body>
void parallel_drops(int n_drops, int n_threads, Body&& body) {
  if (n_threads <= 1) {
    for (int d = 0; d < n_drops; ++d) body(d);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    const int lo = int(std::int64_t(n_drops) * t / n_threads);
    const int hi = int(std::int64_t(n_drops) * (t + 1) / n_threads);
    pool.emplace_back([lo, hi, &body] {
      for (int d = lo; d < hi; ++d) body(d);
    });
  }
  for (auto& th : pool) th.join();
}

SimulationResult assemble(const SimConfig& resolved, std::vector<DropRecord> records) {
  std::vector<double> rates(records.size()), sirs(records.size());
  std::vector<std::int32_t> delays(records.size());
  JointAudit audit;
  std::int64_t inf_drops = 0, resamples = 0;
  double actives = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    rates[i] = records[i].rate;
    sirs[i] = records[i].sir;
    delays[i] = records[i].delay;
    audit.add(records[i].outage != 0, records[i].delay);
    if (std::isinf(records[i].sir)) ++inf_drops;
    resamples += records[i].resamples;
    actives += records[i].actives;
  }
  EmpiricalCdf cdf(rates);
  return SimulationResult{resolved,
                          std::move(rates),
                          std::move(sirs),
                          std::move(delays),
                          std::move(cdf),
                          audit,
                          inf_drops,
                          resamples,
                          records.empty() ? 0.0 : actives / double(records.size())};
}

}  // namespace

SimulationResult empirical_rate_cdf(const SimConfig& config) {
  config.validate();
  SimConfig resolved = config;
  resolved.window_radius = config.resolved_radius();
  std::vector<DropRecord> records(config.n_drops);
  parallel_drops(config.n_drops, resolve_threads(config.n_threads, config.n_drops),
                 [&](int drop) {
                   Rng rng(config.seed, std::uint64_t(drop), 0);
                   const Deployment dep = sample_deployment(resolved, rng);
                   const Snapshot snap = sample_snapshot(resolved, dep, rng);
                   records[drop] = DropRecord{snap.rate,
                                              snap.sir,
                                              snap.delay,
                                              snap.active_interferers,
                                              dep.resamples,
                                              snap.sir < resolved.theta0 ? std::uint8_t(1)
                                                                         : std::uint8_t(0)};
                 });
  return assemble(resolved, std::move(records));
}

std::vector<SimulationResult> empirical_rate_cdf_batch(
    const SimConfig& base, std::span<const std::pair<Scheme, int>> variants) {
  base.validate();
  SimConfig resolved = base;
  resolved.window_radius = base.resolved_radius();
  for (const auto& [scheme, n] : variants) {
    SimConfig v = resolved;
    v.scheme = scheme;
    v.n_subchannels = n;
    v.validate();
  }
  std::vector<std::vector<DropRecord>> records(variants.size());
  for (auto& r : records) r.resize(base.n_drops);
  parallel_drops(base.n_drops, resolve_threads(base.n_threads, base.n_drops), [&](int drop) {
    Rng dep_rng(base.seed, std::uint64_t(drop), 0);
    const Deployment dep = sample_deployment(resolved, dep_rng);
    for (std::size_t v = 0; v < variants.size(); ++v) {
      SimConfig cfg = resolved;
      cfg.scheme = variants[v].first;
      cfg.n_subchannels = variants[v].second;
      Rng rng(base.seed, std::uint64_t(drop), v + 1);
      const Snapshot snap = sample_snapshot(cfg, dep, rng);
      records[v][drop] = DropRecord{snap.rate,
                                    snap.sir,
                                    snap.delay,
                                    snap.active_interferers,
                                    dep.resamples,
                                    snap.sir < cfg.theta0 ? std::uint8_t(1) : std::uint8_t(0)};
    }
  });
  std::vector<SimulationResult> out;
  out.reserve(variants.size());
  for (std::size_t v = 0; v < variants.size(); ++v) {
    SimConfig cfg = resolved;
    cfg.scheme = variants[v].first;
    cfg.n_subchannels = variants[v].second;
    out.push_back(assemble(cfg, std::move(records[v])));
  }
  return out;
}

}  // namespace udn

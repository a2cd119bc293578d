#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace udn {

/// Truncated probability mass function over {0, 1, 2, ...} with an explicit
/// tail-mass certificate. The tail mass is carried, never renormalized away,
/// so downstream consumers can bound the truncation error they inherit.
class DiscretePmf {
 public:
  DiscretePmf(std::vector<double> probs, double tail_mass)
      : probs_(std::move(probs)), tail_mass_(tail_mass) {
    if (!(tail_mass_ >= 0.0))
      throw std::invalid_argument("DiscretePmf: tail mass must be nonnegative");
    double sum = tail_mass_;
    for (double p : probs_) {
      if (!(p >= 0.0) || !(p <= 1.0 + 1e-12))
        throw std::invalid_argument("DiscretePmf: entry outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("DiscretePmf: mass does not normalize to 1");
  }

  std::span<const double> probs() const { return probs_; }
  double tail_mass() const { return tail_mass_; }
  std::size_t size() const { return probs_.size(); }

  /// Probability of value k; zero beyond the truncation point.
  double operator[](std::size_t k) const {
    return k < probs_.size() ? probs_[k] : 0.0;
  }

  /// Mean of the truncated part. The neglected tail contributes at most
  /// tail_mass * (first truncated index) in the regimes used here.
  double mean() const {
    double m = 0.0;
    for (std::size_t k = 1; k < probs_.size(); ++k) m += double(k) * probs_[k];
    return m;
  }

 private:
  std::vector<double> probs_;
  double tail_mass_;
};

}  // namespace udn

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace udn {

/// Multiple-access scheme run by every access point.
///
/// kTdma        - one user served per slot on one randomly selected subchannel.
/// kFdmaTdma    - users are grouped into blocks of N; each block occupies
///                distinct subchannels in parallel, and users sharing a
///                subchannel are time-multiplexed.
enum class Scheme { kTdma, kFdmaTdma };

inline std::string_view to_string(Scheme s) {
  return s == Scheme::kTdma ? "tdma" : "fdma_tdma";
}

inline Scheme scheme_from_string(std::string_view name) {
  if (name == "tdma") return Scheme::kTdma;
  if (name == "fdma_tdma" || name == "fdma") return Scheme::kFdmaTdma;
  throw std::invalid_argument("unknown scheme: " + std::string(name) +
                              " (expected tdma or fdma_tdma)");
}

/// Model parameters consumed by all closed-form expressions.
///
/// tau is the access-point to user density ratio; theta0 is the minimum
/// operational SIR threshold on linear scale (CLI-side dB parsing converts
/// before anything reaches this struct).
struct NetworkConfig {
  double tau = 1.0;          // density ratio lambda_a / lambda_u, > 0
  double alpha = 3.0;        // path-loss exponent, > 2
  double theta0 = 1.0;       // SIR threshold, linear, >= 0
  int n_subchannels = 1;     // bandwidth partitions N, >= 1
  Scheme scheme = Scheme::kTdma;

  void validate() const {
    if (!(tau > 0.0)) throw std::domain_error("NetworkConfig: tau must be positive");
    if (!(alpha > 2.0)) throw std::domain_error("NetworkConfig: alpha must exceed 2");
    if (!(theta0 >= 0.0)) throw std::domain_error("NetworkConfig: theta0 must be nonnegative");
    if (n_subchannels < 1) throw std::domain_error("NetworkConfig: n_subchannels must be >= 1");
  }
};

}  // namespace udn

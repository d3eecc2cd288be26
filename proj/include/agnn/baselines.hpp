#pragma once

#include <cstddef>
#include <vector>

#include "agnn/net_model.hpp"
#include "agnn/rng.hpp"

namespace agnn {

struct WmmseOptions {
  /// Restrict every sum to links with h_ij >= h_eps (plus the direct link), i.e. to
  /// quantities a node can learn from its thresholded neighbourhood.
  bool neighborhood_only = true;
  double h_eps = 3e-3;
  /// Denominators below this value are floored and counted.
  double floor = 1e-300;
};

struct WmmseState {
  Vector v;  // amplitudes, p_i = v_i^2
  Vector u;
  Vector w;
  std::size_t iteration = 0;
};

struct WmmseResult {
  Vector power;
  WmmseState state;
  /// Sum-rate of the channel WMMSE operates on, before the first and after every iteration.
  std::vector<double> sum_rate_history;
  std::size_t floored_denominators = 0;
};

/// K rounds of scalar WMMSE on power gains H (amplitudes sqrt(h)), started from
/// v_i = sqrt(p0)/2 and clipped to [0, sqrt(p0)].
WmmseResult wmmse(const Matrix& H, std::size_t iterations, double p0, double noise_power,
                  const WmmseOptions& options = {});

/// Power vector of wmmse().
Vector wmmse_k(const Matrix& H, std::size_t iterations, double p0, double noise_power,
               const WmmseOptions& options = {});

Vector equal_allocation(std::size_t m, double p_max);

/// Each node transmits at p0 independently with probability P_max / (p0 m).
Vector random_allocation(std::size_t m, double p0, double p_max, Rng& rng);

}  // namespace agnn

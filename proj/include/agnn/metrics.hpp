#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "agnn/async_sched.hpp"
#include "agnn/net_model.hpp"
#include "agnn/policy.hpp"
#include "agnn/rollout.hpp"

namespace agnn {

/// Shannon rate of every link with interference treated as noise:
/// f_i = log2(1 + p_i h_ii / (noise + sum_{j != i} p_j h_ij)).
Vector link_capacity(const Vector& p, const Matrix& H, double noise_power);

/// Welford accumulator for a Monte-Carlo mean and its standard error.
class RunningStats {
 public:
  void add(double v) {
    ++n_;
    const double d = v - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (v - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stderr_of_mean() const { return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct PerformanceReport {
  Vector f;  // mean per-link performance
  double sum_capacity = 0.0;
  double sum_capacity_stderr = 0.0;
  double total_power = 0.0;
  double total_power_stderr = 0.0;
  double constraint_slack = 0.0;  // P_max - mean total power
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Everything needed to draw rollouts on one fixed network.
struct EvaluationSetup {
  Matrix pathloss;
  ChannelConfig channel;
  ActivationModel activation;
  ProtocolConfig protocol;
  std::size_t rollout_length = 10;
  double p_max = 25.0;
};

/// Per-sample random streams used by every Monte-Carlo loop, so that methods compared
/// within a run see identical channels and activations.
struct SampleStreams {
  Rng fading;
  Rng activation;
  Rng decisions;
  Rng baseline;
};
SampleStreams sample_streams(std::uint64_t seed, std::uint64_t sample_index);

/// Monte-Carlo means over `samples` independent rollouts, each measured at its final slot.
PerformanceReport evaluate_policy(const PolicyParameters& params, const EvaluationSetup& setup,
                                  std::size_t samples, std::uint64_t seed);

}  // namespace agnn

#include "agnn/metrics.hpp"

#include <algorithm>

#include "agnn/errors.hpp"

namespace agnn {

Vector link_capacity(const Vector& p, const Matrix& H, double noise_power) {
  if (H.rows() != H.cols() || H.rows() != p.size()) throw InvalidArgument("link_capacity: dimension mismatch");
  if ((p.array() < 0.0).any()) throw InvalidArgument("link_capacity: negative power");
  const Vector received = H * p;
  Vector f(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double signal = p(i) * H(i, i);
    const double interference = received(i) - signal;
    f(i) = std::log2(1.0 + signal / (noise_power + std::max(interference, 0.0)));
  }
  return f;
}

SampleStreams sample_streams(std::uint64_t seed, std::uint64_t sample_index) {
  return SampleStreams{make_rng(seed, "fading", sample_index), make_rng(seed, "activation", sample_index),
                       make_rng(seed, "policy-sampling", sample_index), make_rng(seed, "baseline", sample_index)};
}

PerformanceReport evaluate_policy(const PolicyParameters& params, const EvaluationSetup& setup,
                                  std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("evaluate_policy: need at least one sample");
  if (setup.rollout_length < setup.protocol.hops)
    throw InvalidArgument("evaluate_policy: rollout shorter than the hop depth");
  const auto m = setup.pathloss.rows();
  PerformanceReport report;
  report.f = Vector::Zero(m);
  RunningStats cap, power;
  for (std::size_t s = 0; s < samples; ++s) {
    auto streams = sample_streams(seed, s);
    const Scenario sc = sample_scenario(setup.pathloss, setup.channel, setup.activation, setup.rollout_length,
                                        streams.fading, streams.activation);
    const RolloutResult r = run_protocol(sc, params, setup.protocol, streams.decisions);
    const Vector f = link_capacity(r.power, sc.last().H, setup.channel.noise_power);
    report.f += f;
    cap.add(f.sum());
    power.add(r.power.sum());
  }
  report.f /= static_cast<double>(samples);
  report.sum_capacity = cap.mean();
  report.sum_capacity_stderr = cap.stderr_of_mean();
  report.total_power = power.mean();
  report.total_power_stderr = power.stderr_of_mean();
  report.constraint_slack = setup.p_max - report.total_power;
  report.samples = samples;
  report.seed = seed;
  return report;
}

}  // namespace agnn

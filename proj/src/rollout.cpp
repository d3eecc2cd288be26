#include "agnn/rollout.hpp"

#include <algorithm>

#include "agnn/errors.hpp"

namespace agnn {

Scenario sample_scenario(const Matrix& pathloss, const ChannelConfig& channel, const ActivationModel& activation,
                         std::size_t length, Rng& fading_rng, Rng& activation_rng) {
  if (length == 0) throw InvalidArgument("sample_scenario: length must be >= 1");
  Scenario s;
  s.channels.reserve(length);
  s.active.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    s.channels.push_back(sample_channel(pathloss, channel, fading_rng));
    s.active.push_back(sample_active_set(activation, activation_rng));
  }
  return s;
}

Matrix permute_matrix(const Matrix& H, const std::vector<std::size_t>& perm) {
  if (static_cast<std::size_t>(H.rows()) != perm.size()) throw InvalidArgument("permute_matrix: size mismatch");
  Matrix out(H.rows(), H.cols());
  for (Eigen::Index i = 0; i < H.rows(); ++i)
    for (Eigen::Index j = 0; j < H.cols(); ++j)
      out(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]),
          static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)])) = H(i, j);
  return out;
}

Vector permute_vector(const Vector& x, const std::vector<std::size_t>& perm) {
  if (static_cast<std::size_t>(x.size()) != perm.size()) throw InvalidArgument("permute_vector: size mismatch");
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)])) = x(i);
  return out;
}

Scenario permute(const Scenario& scenario, const std::vector<std::size_t>& perm) {
  Scenario out;
  for (const auto& c : scenario.channels) out.channels.push_back({permute_matrix(c.H, perm), permute_vector(c.x, perm)});
  for (const auto& a : scenario.active) {
    ActiveSet b;
    for (std::size_t i : a) b.push_back(perm.at(i));
    std::sort(b.begin(), b.end());
    out.active.push_back(std::move(b));
  }
  return out;
}

AggregationBuffer aggregate(const Scenario& scenario, const ProtocolConfig& config) {
  if (scenario.length() == 0) throw InvalidArgument("aggregate: empty scenario");
  auto buffer = AggregationBuffer::initial(scenario.channels[0].x, config.hops);
  for (std::size_t t = 1; t < scenario.length(); ++t) {
    const auto adj = effective_adjacency(scenario.channels[t].H, scenario.active[t], config.h_eps,
                                         config.include_self_loops);
    buffer.step(adj, scenario.channels[t].x);
  }
  return buffer;
}

namespace {

void decide(NodeOutcome& node, const Vector& sequence, const PolicyParameters& params, double p0, Rng& rng) {
  const double q = forward(sequence, params, &node.cache);
  node.decision = sample_allocation(q, p0, rng);
  node.decided = true;
}

}  // namespace

RolloutResult run_protocol(const Scenario& scenario, std::span<const PolicyParameters* const> copies,
                           const ProtocolConfig& config, Rng& decision_rng) {
  const std::size_t m = scenario.nodes();
  if (scenario.length() == 0) throw InvalidArgument("run_protocol: empty scenario");
  if (copies.size() != m) throw InvalidArgument("run_protocol: need one parameter copy per node");
  for (const auto* c : copies)
    if (c == nullptr || c->shape().hops != config.hops)
      throw InvalidArgument("run_protocol: policy hop depth does not match protocol");

  RolloutResult out;
  out.nodes.resize(m);
  auto buffer = AggregationBuffer::initial(scenario.channels[0].x, config.hops);
  for (std::size_t t = 0; t < scenario.length(); ++t) {
    if (t > 0) {
      const auto adj = effective_adjacency(scenario.channels[t].H, scenario.active[t], config.h_eps,
                                           config.include_self_loops);
      buffer.step(adj, scenario.channels[t].x);
    }
    if (config.hold_inactive) {
      for (std::size_t i : scenario.active[t]) decide(out.nodes[i], buffer.sequence(i), *copies[i], config.p0, decision_rng);
    }
  }
  if (!config.hold_inactive)
    for (std::size_t i = 0; i < m; ++i) decide(out.nodes[i], buffer.sequence(i), *copies[i], config.p0, decision_rng);

  out.power = Vector::Zero(static_cast<Eigen::Index>(m));
  out.q = Vector::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (!out.nodes[i].decided) continue;
    out.power(static_cast<Eigen::Index>(i)) = out.nodes[i].decision.p;
    out.q(static_cast<Eigen::Index>(i)) = out.nodes[i].decision.q;
  }
  out.overhead_scalars = buffer.overhead_scalars();
  return out;
}

RolloutResult run_protocol(const Scenario& scenario, const PolicyParameters& params, const ProtocolConfig& config,
                           Rng& decision_rng) {
  std::vector<const PolicyParameters*> copies(scenario.nodes(), &params);
  return run_protocol(scenario, copies, config, decision_rng);
}

}  // namespace agnn

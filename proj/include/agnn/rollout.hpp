#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "agnn/aggregation.hpp"
#include "agnn/async_sched.hpp"
#include "agnn/net_model.hpp"
#include "agnn/policy.hpp"

namespace agnn {

/// Random inputs of one rollout: the channel, node states and active set at each slot.
struct Scenario {
  std::vector<ChannelSample> channels;
  std::vector<ActiveSet> active;

  std::size_t length() const { return channels.size(); }
  std::size_t nodes() const { return channels.empty() ? 0 : static_cast<std::size_t>(channels.front().x.size()); }
  const ChannelSample& last() const { return channels.back(); }
};

Scenario sample_scenario(const Matrix& pathloss, const ChannelConfig& channel, const ActivationModel& activation,
                         std::size_t length, Rng& fading_rng, Rng& activation_rng);

/// Relabels every node i as perm[i]: H -> P^T H P, x -> P^T x, active sets mapped.
Scenario permute(const Scenario& scenario, const std::vector<std::size_t>& perm);
Matrix permute_matrix(const Matrix& H, const std::vector<std::size_t>& perm);
Vector permute_vector(const Vector& x, const std::vector<std::size_t>& perm);

struct ProtocolConfig {
  std::size_t hops = 5;
  double p0 = 2.0;
  double h_eps = 3e-3;
  bool include_self_loops = false;
  /// When set, only active nodes redraw their allocation at a slot and inactive
  /// nodes keep their previous one. Otherwise every node draws at the final slot.
  bool hold_inactive = false;
};

/// The decision in force for a node at the end of a rollout.
struct NodeOutcome {
  bool decided = false;  // false: the node never drew an allocation (p = 0, no score)
  AllocationDecision decision;
  LayerCache cache;
};

struct RolloutResult {
  std::vector<NodeOutcome> nodes;
  Vector power;  // allocation in force at the final slot
  Vector q;      // probability behind each node's decision (0 when undecided)
  std::size_t overhead_scalars = 0;
};

/// Runs the message-passing protocol over the scenario; node i evaluates the policy
/// with *copies[i]. Buffers evolve for every node, active or not.
RolloutResult run_protocol(const Scenario& scenario, std::span<const PolicyParameters* const> copies,
                           const ProtocolConfig& config, Rng& decision_rng);

/// All nodes share the same parameters.
RolloutResult run_protocol(const Scenario& scenario, const PolicyParameters& params,
                           const ProtocolConfig& config, Rng& decision_rng);

/// Aggregation buffer after running the whole scenario.
AggregationBuffer aggregate(const Scenario& scenario, const ProtocolConfig& config);

}  // namespace agnn

#pragma once

#include <cstddef>
#include <vector>

#include "agnn/async_sched.hpp"
#include "agnn/net_model.hpp"

namespace agnn {

/// Channel matrix masked to the links that carry messages at one slot:
/// entry (i, j) survives only when j is active, h_ij >= h_eps and j != i.
struct EffectiveAdjacency {
  Matrix H0;
  std::size_t active_count = 0;
};

EffectiveAdjacency effective_adjacency(const Matrix& H, const ActiveSet& active, double h_eps,
                                       bool include_self_loops = false);

/// Per-node aggregation sequences. Row i is y_i(t) = [y_i^(0), ..., y_i^(K-1)];
/// column k holds the k-hop diffused states.
class AggregationBuffer {
 public:
  AggregationBuffer(std::size_t nodes, std::size_t hops);

  /// Buffer at the first slot: column 0 = x(0), every other column zero.
  static AggregationBuffer initial(const Vector& x0, std::size_t hops);

  /// Advances one slot: column 0 <- x(t), column k <- H0(t) * previous column k-1.
  void step(const EffectiveAdjacency& adjacency, const Vector& x);

  std::size_t nodes() const { return static_cast<std::size_t>(y_.rows()); }
  std::size_t hops() const { return static_cast<std::size_t>(y_.cols()); }
  const Matrix& values() const { return y_; }
  Vector sequence(std::size_t node) const { return y_.row(static_cast<Eigen::Index>(node)).transpose(); }

  /// Scalars exchanged so far: each active node sends K-1 values per slot.
  std::size_t overhead_scalars() const { return overhead_; }

 private:
  Matrix y_;
  std::size_t overhead_ = 0;
};

}  // namespace agnn

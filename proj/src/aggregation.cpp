#include "agnn/aggregation.hpp"

#include <string>

#include "agnn/errors.hpp"

namespace agnn {

EffectiveAdjacency effective_adjacency(const Matrix& H, const ActiveSet& active, double h_eps,
                                       bool include_self_loops) {
  if (H.rows() != H.cols()) throw InvalidArgument("effective_adjacency: H must be square");
  const auto m = static_cast<std::size_t>(H.rows());
  EffectiveAdjacency out;
  out.H0 = Matrix::Zero(H.rows(), H.cols());
  const std::vector<bool> mask = to_mask(active, m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!mask[j]) continue;
    ++out.active_count;
    const auto col = static_cast<Eigen::Index>(j);
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
      if (i == col && !include_self_loops) continue;
      if (H(i, col) >= h_eps) out.H0(i, col) = H(i, col);
    }
  }
  return out;
}

AggregationBuffer::AggregationBuffer(std::size_t nodes, std::size_t hops)
    : y_(Matrix::Zero(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(hops))) {
  if (hops == 0) throw InvalidArgument("AggregationBuffer: hop depth K must be >= 1");
}

AggregationBuffer AggregationBuffer::initial(const Vector& x0, std::size_t hops) {
  AggregationBuffer buf(static_cast<std::size_t>(x0.size()), hops);
  buf.y_.col(0) = x0;
  return buf;
}

void AggregationBuffer::step(const EffectiveAdjacency& adjacency, const Vector& x) {
  const Matrix& H0 = adjacency.H0;
  if (H0.rows() != y_.rows() || H0.cols() != y_.rows() || x.size() != y_.rows())
    throw InvalidArgument("AggregationBuffer::step: dimension mismatch (buffer has " +
                          std::to_string(y_.rows()) + " nodes)");
  // Descending k reads column k-1 before it is overwritten.
  for (Eigen::Index k = y_.cols() - 1; k >= 1; --k) y_.col(k) = H0 * y_.col(k - 1);
  y_.col(0) = x;
  overhead_ += adjacency.active_count * (hops() - 1);
}

}  // namespace agnn

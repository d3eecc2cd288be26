#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

#include "agnn/net_model.hpp"
#include "agnn/rng.hpp"

namespace agnn {

/// Architecture of the shared per-node policy: `layers` single-feature convolution
/// layers with `taps`-tap filters over a length-`hops` aggregation sequence, then a
/// linear readout and a sigmoid.
struct PolicyShape {
  std::size_t layers = 10;
  std::size_t taps = 5;
  std::size_t hops = 5;
  bool bias = false;

  std::size_t num_params() const;
  bool operator==(const PolicyShape&) const = default;
};

enum class InitScheme {
  kUniformFanIn,  // U[-c, c], c = fan_in^(-1/2)
  kUniformHe,     // U[-c, c], c = (6 / fan_in)^(1/2)
  kDelta,         // centre tap 1 plus U[-c, c] with c = 0.1 fan_in^(-1/2); readout as kUniformFanIn
};

std::string_view to_string(InitScheme scheme);
InitScheme init_scheme_from_string(std::string_view name);

/// Filter tensor plus readout, stored as one flat vector so that gradients and
/// optimizer steps act on a single coordinate space.
///
/// Layout: [filters, layer by layer][layer biases][readout weights][readout bias];
/// the two bias blocks exist only when shape.bias is set.
class PolicyParameters {
 public:
  PolicyParameters() = default;
  explicit PolicyParameters(const PolicyShape& shape);

  static PolicyParameters initialize(const PolicyShape& shape, InitScheme scheme, Rng& rng);

  const PolicyShape& shape() const { return shape_; }
  std::size_t size() const { return static_cast<std::size_t>(theta_.size()); }

  Vector& flat() { return theta_; }
  const Vector& flat() const { return theta_; }

  /// Coefficients of layer l (0-based).
  auto filter(std::size_t l) { return theta_.segment(filter_offset(l), taps()); }
  auto filter(std::size_t l) const { return theta_.segment(filter_offset(l), taps()); }
  double layer_bias(std::size_t l) const { return shape_.bias ? theta_(bias_offset(l)) : 0.0; }
  auto readout() { return theta_.segment(readout_offset(), hops()); }
  auto readout() const { return theta_.segment(readout_offset(), hops()); }
  double readout_bias() const { return shape_.bias ? theta_(theta_.size() - 1) : 0.0; }

  Eigen::Index filter_offset(std::size_t l) const { return static_cast<Eigen::Index>(l * shape_.taps); }
  Eigen::Index bias_offset(std::size_t l) const {
    return static_cast<Eigen::Index>(shape_.layers * shape_.taps + l);
  }
  Eigen::Index readout_offset() const {
    return static_cast<Eigen::Index>(shape_.layers * shape_.taps + (shape_.bias ? shape_.layers : 0));
  }
  Eigen::Index readout_bias_offset() const { return theta_.size() - 1; }

 private:
  Eigen::Index taps() const { return static_cast<Eigen::Index>(shape_.taps); }
  Eigen::Index hops() const { return static_cast<Eigen::Index>(shape_.hops); }

  PolicyShape shape_;
  Vector theta_;
};

/// Activations of one forward pass, kept for backpropagation.
struct LayerCache {
  PolicyShape shape;
  std::vector<Vector> pre;   // pre[l]: conv output of layer l+1, before ReLU
  std::vector<Vector> post;  // post[0] = input, post[l] = ReLU(pre[l-1])
  double logit = 0.0;
  double q = 0.5;
};

struct AllocationDecision {
  double q = 0.5;
  double p = 0.0;
  bool transmit = false;
};

/// Same-length convolution with zero padding; tap k multiplies input n - k + (taps-1)/2.
Vector convolve_same(const Eigen::Ref<const Vector>& filter, const Vector& input);

double sigmoid(double z);

/// Transmit probability for one node's aggregation sequence.
double forward(const Vector& sequence, const PolicyParameters& params, LayerCache* cache = nullptr);

/// Bernoulli(q) draw between 0 and p0.
AllocationDecision sample_allocation(double q, double p0, Rng& rng);

/// Gradient of the logit w.r.t. all parameters, scaled by `sensitivity`.
Vector backpropagate(const LayerCache& cache, const PolicyParameters& params, double sensitivity);

/// grad log pi(decision | sequence): logit sensitivity (a - q) pushed back through the cache.
Vector score_gradient(const LayerCache& cache, const AllocationDecision& decision,
                      const PolicyParameters& params);

void save_model(const std::filesystem::path& path, const PolicyParameters& params);
PolicyParameters load_model(const std::filesystem::path& path);

}  // namespace agnn

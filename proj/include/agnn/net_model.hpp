#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "agnn/rng.hpp"

namespace agnn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

/// Transmitter/receiver geometry. pairing[i] is the receiver r(i) served by transmitter i.
struct Topology {
  std::vector<Point> tx_pos;
  std::vector<Point> rx_pos;
  std::vector<std::size_t> pairing;

  std::size_t num_tx() const { return tx_pos.size(); }
  std::size_t num_rx() const { return rx_pos.size(); }

  /// Throws InvalidArgument if sizes or pairing are inconsistent.
  void validate() const;
};

/// Law of the per-node state vector x(t).
enum class NodeStateLaw {
  kExponential,   // i.i.d. unit-mean exponential, independent of H
  kDirectGain,    // x_i = h_ii(t)
  kDirectGainDb,  // x_i = 10 log10(h_ii(t) / noise_power)
};

std::string_view to_string(NodeStateLaw law);
NodeStateLaw node_state_law_from_string(std::string_view name);

struct ChannelConfig {
  double pathloss_exponent = 2.2;
  double fading_scale = 2.0;  // Rayleigh scale sigma
  double h_eps = 3e-3;
  double noise_power = 1.0;
  NodeStateLaw node_state_law = NodeStateLaw::kExponential;

  void validate() const;
};

/// One draw of the link-state matrix and node states at a single time index.
/// H(i, j) is the gain from transmitter j to the receiver r(i).
struct ChannelSample {
  Matrix H;
  Vector x;
};

Topology generate_topology(std::size_t m, std::uint64_t seed);

/// ||a - b||^(-exponent); throws DegenerateGeometry for coincident points.
double pathloss_gain(const Point& a, const Point& b, double exponent);

/// Pathloss part of H, which only depends on the geometry.
Matrix pathloss_matrix(const Topology& topology, double exponent);

double sample_rayleigh(double scale, Rng& rng);
double sample_exponential(double mean, Rng& rng);

ChannelSample sample_channel(const Topology& topology, const ChannelConfig& cfg, Rng& rng);

/// Same as sample_channel but reuses a precomputed pathloss matrix.
ChannelSample sample_channel(const Matrix& pathloss, const ChannelConfig& cfg, Rng& rng);

Vector sample_node_states(const Matrix& H, const ChannelConfig& cfg, Rng& rng);

}  // namespace agnn

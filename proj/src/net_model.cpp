#include "agnn/net_model.hpp"

#include <cmath>
#include <string>

#include "agnn/errors.hpp"

namespace agnn {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Topology::validate() const {
  if (tx_pos.empty()) throw InvalidArgument("topology has no transmitters");
  if (rx_pos.empty() || rx_pos.size() > tx_pos.size())
    throw InvalidArgument("topology needs 1 <= n <= m receivers");
  if (pairing.size() != tx_pos.size())
    throw InvalidArgument("pairing must map every transmitter to a receiver");
  for (std::size_t r : pairing)
    if (r >= rx_pos.size()) throw InvalidArgument("pairing references unknown receiver " + std::to_string(r));
}

std::string_view to_string(NodeStateLaw law) {
  switch (law) {
    case NodeStateLaw::kExponential: return "exponential";
    case NodeStateLaw::kDirectGain: return "direct_gain";
    case NodeStateLaw::kDirectGainDb: return "direct_gain_db";
  }
  return "unknown";
}

NodeStateLaw node_state_law_from_string(std::string_view name) {
  if (name == "exponential") return NodeStateLaw::kExponential;
  if (name == "direct_gain") return NodeStateLaw::kDirectGain;
  if (name == "direct_gain_db") return NodeStateLaw::kDirectGainDb;
  throw InvalidArgument("unknown node state law '" + std::string(name) + "'");
}

void ChannelConfig::validate() const {
  if (!(pathloss_exponent > 0.0)) throw InvalidArgument("pathloss_exponent must be > 0");
  if (!(fading_scale > 0.0)) throw InvalidArgument("fading_scale must be > 0");
  if (!(h_eps >= 0.0)) throw InvalidArgument("h_eps must be >= 0");
  if (!(noise_power > 0.0)) throw InvalidArgument("noise_power must be > 0");
}

Topology generate_topology(std::size_t m, std::uint64_t seed) {
  if (m == 0) throw InvalidArgument("generate_topology: m must be >= 1");
  Rng rng{mix_seed(seed)};
  const double half = static_cast<double>(m);
  const double offset = half / 4.0;
  auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * uniform01(rng); };

  Topology topo;
  topo.tx_pos.reserve(m);
  topo.rx_pos.reserve(m);
  topo.pairing.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Point a{uniform(-half, half), uniform(-half, half)};
    Point b{a.x + uniform(-offset, offset), a.y + uniform(-offset, offset)};
    topo.tx_pos.push_back(a);
    topo.rx_pos.push_back(b);
    topo.pairing.push_back(i);
  }
  return topo;
}

double pathloss_gain(const Point& a, const Point& b, double exponent) {
  const double d = distance(a, b);
  if (d == 0.0) throw DegenerateGeometry("pathloss_gain: coincident points");
  return std::pow(d, -exponent);
}

Matrix pathloss_matrix(const Topology& topology, double exponent) {
  topology.validate();
  const auto m = static_cast<Eigen::Index>(topology.num_tx());
  Matrix pl(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Point& rx = topology.rx_pos[topology.pairing[static_cast<std::size_t>(i)]];
    for (Eigen::Index j = 0; j < m; ++j)
      pl(i, j) = pathloss_gain(topology.tx_pos[static_cast<std::size_t>(j)], rx, exponent);
  }
  return pl;
}

double sample_rayleigh(double scale, Rng& rng) {
  // Inverse CDF; 1 - u keeps the argument of log in (0, 1].
  return scale * std::sqrt(-2.0 * std::log(1.0 - uniform01(rng)));
}

double sample_exponential(double mean, Rng& rng) { return -mean * std::log(1.0 - uniform01(rng)); }

Vector sample_node_states(const Matrix& H, const ChannelConfig& cfg, Rng& rng) {
  const Eigen::Index m = H.rows();
  Vector x(m);
  switch (cfg.node_state_law) {
    case NodeStateLaw::kExponential:
      for (Eigen::Index i = 0; i < m; ++i) x(i) = sample_exponential(1.0, rng);
      break;
    case NodeStateLaw::kDirectGain:
      x = H.diagonal();
      break;
    case NodeStateLaw::kDirectGainDb:
      for (Eigen::Index i = 0; i < m; ++i) x(i) = 10.0 * std::log10(H(i, i) / cfg.noise_power);
      break;
  }
  return x;
}

ChannelSample sample_channel(const Matrix& pathloss, const ChannelConfig& cfg, Rng& rng) {
  const Eigen::Index m = pathloss.rows();
  ChannelSample s;
  s.H.resize(m, m);
  // Row-major draw order so traces do not depend on Eigen's storage order.
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) s.H(i, j) = pathloss(i, j) * sample_rayleigh(cfg.fading_scale, rng);
  s.x = sample_node_states(s.H, cfg, rng);
  return s;
}

ChannelSample sample_channel(const Topology& topology, const ChannelConfig& cfg, Rng& rng) {
  return sample_channel(pathloss_matrix(topology, cfg.pathloss_exponent), cfg, rng);
}

}  // namespace agnn

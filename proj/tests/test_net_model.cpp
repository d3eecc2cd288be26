#include <cmath>

#include <gtest/gtest.h>

#include "agnn/errors.hpp"
#include "agnn/net_model.hpp"

namespace agnn {
namespace {

TEST(GenerateTopology, DefaultGeometryBounds) {
  const Topology t = generate_topology(25, 7);
  ASSERT_EQ(t.num_tx(), 25u);
  ASSERT_EQ(t.num_rx(), 25u);
  for (std::size_t i = 0; i < 25; ++i) {
    EXPECT_LE(std::abs(t.tx_pos[i].x), 25.0);
    EXPECT_LE(std::abs(t.tx_pos[i].y), 25.0);
    EXPECT_LE(std::abs(t.rx_pos[i].x - t.tx_pos[i].x), 25.0 / 4.0);
    EXPECT_LE(std::abs(t.rx_pos[i].y - t.tx_pos[i].y), 25.0 / 4.0);
    EXPECT_EQ(t.pairing[i], i);
  }
}

TEST(GenerateTopology, SingleNodeOffsetSquare) {
  const Topology t = generate_topology(1, 0);
  EXPECT_LE(std::abs(t.tx_pos[0].x), 1.0);
  EXPECT_LE(std::abs(t.rx_pos[0].x - t.tx_pos[0].x), 0.25);
  EXPECT_LE(std::abs(t.rx_pos[0].y - t.tx_pos[0].y), 0.25);
}

TEST(GenerateTopology, DeterministicUnderSeed) {
  const Topology a = generate_topology(25, 7);
  const Topology b = generate_topology(25, 7);
  const Topology c = generate_topology(25, 8);
  bool any_diff = false;
  for (std::size_t i = 0; i < 25; ++i) {
    EXPECT_EQ(a.tx_pos[i].x, b.tx_pos[i].x);
    EXPECT_EQ(a.rx_pos[i].y, b.rx_pos[i].y);
    any_diff |= a.tx_pos[i].x != c.tx_pos[i].x;
  }
  EXPECT_TRUE(any_diff);
}

TEST(GenerateTopology, ZeroNodesRejected) { EXPECT_THROW(generate_topology(0, 1), InvalidArgument); }

TEST(PathlossGain, HandValues) {
  EXPECT_DOUBLE_EQ(pathloss_gain({0, 0}, {1, 0}, 2.2), 1.0);
  EXPECT_NEAR(pathloss_gain({0, 0}, {0, 2}, 2.2), 0.21764, 1e-5);
  EXPECT_DOUBLE_EQ(pathloss_gain({1, 1}, {1, 3}, 2.0), 0.25);
}

TEST(PathlossGain, CoincidentPointsAreDegenerate) {
  EXPECT_THROW(pathloss_gain({3, 4}, {3, 4}, 2.2), DegenerateGeometry);
  try {
    pathloss_gain({0, 0}, {0, 0}, 2.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kDegenerateGeometry);
  }
}

TEST(PathlossGain, StrictlyDecreasingInDistance) {
  double prev = pathloss_gain({0, 0}, {0.1, 0}, 2.2);
  for (double d = 0.2; d < 50.0; d += 0.37) {
    const double g = pathloss_gain({0, 0}, {d, 0}, 2.2);
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(SampleChannel, NonnegativeFiniteAndFresh) {
  const Topology t = generate_topology(10, 3);
  ChannelConfig cfg;
  Rng rng{11};
  const ChannelSample a = sample_channel(t, cfg, rng);
  const ChannelSample b = sample_channel(t, cfg, rng);
  ASSERT_EQ(a.H.rows(), 10);
  EXPECT_TRUE((a.H.array() >= 0.0).all());
  EXPECT_TRUE(a.H.allFinite());
  EXPECT_TRUE((a.x.array() >= 0.0).all());
  EXPECT_NE(a.H(0, 1), b.H(0, 1));
}

TEST(SampleChannel, DeterministicUnderSeed) {
  const Topology t = generate_topology(6, 3);
  ChannelConfig cfg;
  Rng r1{42}, r2{42};
  const ChannelSample a = sample_channel(t, cfg, r1);
  const ChannelSample b = sample_channel(t, cfg, r2);
  EXPECT_EQ(a.H, b.H);
  EXPECT_EQ(a.x, b.x);
}

TEST(SampleChannel, EntriesArePathlossTimesFading) {
  const Topology t = generate_topology(4, 5);
  ChannelConfig cfg;
  const Matrix pl = pathloss_matrix(t, cfg.pathloss_exponent);
  // H(i, j) uses transmitter j and the receiver of i.
  EXPECT_DOUBLE_EQ(pl(1, 2), pathloss_gain(t.tx_pos[2], t.rx_pos[1], 2.2));
  Rng rng{1};
  Rng replay{1};
  const ChannelSample s = sample_channel(pl, cfg, rng);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(s.H(i, j), pl(i, j) * sample_rayleigh(2.0, replay));
}

TEST(Rayleigh, MonteCarloMeanAndVariance) {
  Rng rng{2024};
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = sample_rayleigh(2.0, rng);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  const double expected_mean = 2.0 * std::sqrt(M_PI / 2.0);  // 2.5066
  const double expected_var = (4.0 - M_PI) / 2.0 * 4.0;
  EXPECT_NEAR(mean, 2.5066, 0.02 * 2.5066);
  EXPECT_NEAR(mean, expected_mean, 3.0 * std::sqrt(expected_var / n));
  // Var of the sample variance is (mu4 - sigma^4)/n; mu4 = 8 sigma^4 for Rayleigh(sigma).
  const double mu4 = 8.0 * 16.0;
  EXPECT_NEAR(var, expected_var, 3.0 * std::sqrt((mu4 - expected_var * expected_var) / n));
}

TEST(NodeStates, ExponentialHasUnitMean) {
  const Matrix H = Matrix::Ones(50, 50);
  ChannelConfig cfg;
  Rng rng{9};
  double sum = 0.0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) sum += sample_node_states(H, cfg, rng).sum();
  EXPECT_NEAR(sum / (reps * 50.0), 1.0, 3.0 / std::sqrt(reps * 50.0));
}

TEST(NodeStates, DirectGainLaws) {
  Matrix H(2, 2);
  H << 0.5, 0.1, 0.2, 10.0;
  ChannelConfig cfg;
  cfg.noise_power = 0.5;
  Rng rng{1};
  cfg.node_state_law = NodeStateLaw::kDirectGain;
  EXPECT_EQ(sample_node_states(H, cfg, rng), Vector(H.diagonal()));
  cfg.node_state_law = NodeStateLaw::kDirectGainDb;
  const Vector db = sample_node_states(H, cfg, rng);
  EXPECT_NEAR(db(0), 0.0, 1e-12);
  EXPECT_NEAR(db(1), 10.0 * std::log10(20.0), 1e-12);
  EXPECT_EQ(node_state_law_from_string("direct_gain_db"), NodeStateLaw::kDirectGainDb);
  EXPECT_THROW(node_state_law_from_string("gaussian"), InvalidArgument);
}

TEST(ChannelConfig, Validation) {
  ChannelConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.noise_power = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.h_eps = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Topology, GeneralPairingManyToOne) {
  Topology t;
  t.tx_pos = {{0, 0}, {5, 0}, {10, 0}};
  t.rx_pos = {{1, 0}, {9, 0}};
  t.pairing = {0, 0, 1};
  EXPECT_NO_THROW(t.validate());
  const Matrix pl = pathloss_matrix(t, 2.0);
  EXPECT_DOUBLE_EQ(pl(1, 1), 1.0 / 16.0);  // tx 1 -> rx 0 at distance 4
  t.pairing = {0, 0, 2};
  EXPECT_THROW(t.validate(), InvalidArgument);
}

}  // namespace
}  // namespace agnn

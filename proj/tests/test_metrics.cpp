#include <cmath>

#include <gtest/gtest.h>

#include "agnn/errors.hpp"
#include "agnn/metrics.hpp"
#include "oracles.hpp"

namespace agnn {
namespace {

Matrix random_gains(std::size_t m, Rng& rng) {
  Matrix H(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < H.rows(); ++i)
    for (Eigen::Index j = 0; j < H.cols(); ++j) H(i, j) = (i == j ? 1.0 : 0.2) * uniform01(rng);
  return H;
}

TEST(LinkCapacity, HandExample) {
  Matrix H(2, 2);
  H << 1, 0.1, 0.1, 1;
  const Vector f = link_capacity((Vector(2) << 2, 0).finished(), H, 1.0);
  EXPECT_NEAR(f(0), std::log2(3.0), 1e-15);
  EXPECT_EQ(f(1), 0.0);
}

TEST(LinkCapacity, ZeroPowerAndInterferenceFree) {
  Rng rng{1};
  const Matrix H = random_gains(5, rng);
  EXPECT_TRUE(link_capacity(Vector::Zero(5), H, 1.0).isZero());
  const Matrix D = Matrix(H.diagonal().asDiagonal());
  const Vector f = link_capacity(Vector::Constant(5, 2.0), D, 0.5);
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(f(i), std::log2(1.0 + 2.0 * H(i, i) / 0.5), 1e-14);
  EXPECT_THROW(link_capacity(-Vector::Ones(5), H, 1.0), InvalidArgument);
}

TEST(LinkCapacity, MatchesLonghandSum) {
  Rng rng{4};
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix H = random_gains(6, rng);
    Vector p(6);
    for (Eigen::Index i = 0; i < 6; ++i) p(i) = 2.0 * uniform01(rng);
    EXPECT_NEAR(link_capacity(p, H, 1.0).sum(), oracle::reference_sum_rate(p, H, 1.0), 1e-12);
  }
}

TEST(LinkCapacity, Monotonicity) {
  Rng rng{9};
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix H = random_gains(5, rng);
    Vector p(5);
    for (Eigen::Index i = 0; i < 5; ++i) p(i) = 2.0 * uniform01(rng);
    const Vector base = link_capacity(p, H, 1.0);
    const auto k = static_cast<Eigen::Index>(trial % 5);
    Vector more = p;
    more(k) += 0.5;
    const Vector after = link_capacity(more, H, 1.0);
    EXPECT_GE(after(k), base(k));
    for (Eigen::Index i = 0; i < 5; ++i)
      if (i != k) EXPECT_LE(after(i), base(i));
  }
}

TEST(LinkCapacity, SumInvariantUnderRelabelling) {
  Rng rng{13};
  const Matrix H = random_gains(5, rng);
  const Vector p = (Vector(5) << 2, 0, 2, 1, 0.5).finished();
  const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  EXPECT_NEAR(link_capacity(permute_vector(p, perm), permute_matrix(H, perm), 1.0).sum(),
              link_capacity(p, H, 1.0).sum(), 1e-13);
}

TEST(RunningStats, MeanAndStderr) {
  RunningStats s;
  for (double v : {1.0, 2.0, 3.0, 4.0}) s.add(v);
  EXPECT_DOUBLE_EQ(s.mean(), 2.5);
  EXPECT_NEAR(s.variance(), 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.stderr_of_mean(), std::sqrt(5.0 / 12.0), 1e-15);
}

EvaluationSetup small_setup(std::size_t m) {
  EvaluationSetup setup;
  setup.pathloss = pathloss_matrix(generate_topology(m, 4), 2.2);
  setup.activation = always_active(m);
  setup.protocol.hops = 3;
  setup.rollout_length = 4;
  setup.p_max = static_cast<double>(m);
  return setup;
}

TEST(EvaluatePolicy, ZeroPolicyUsesHalfPower) {
  const auto setup = small_setup(10);
  const PolicyParameters zero(PolicyShape{4, 3, 3, false});
  const PerformanceReport r = evaluate_policy(zero, setup, 4000, 1);
  // Bernoulli(1/2) at p0 = 2 on 10 nodes: mean 10, sd 2*sqrt(10)/2.
  EXPECT_NEAR(r.total_power, 10.0, 3.0 * std::sqrt(10.0) / std::sqrt(4000.0));
  EXPECT_NEAR(r.constraint_slack, setup.p_max - r.total_power, 1e-12);
  EXPECT_NEAR(r.f.sum(), r.sum_capacity, 1e-9);
  EXPECT_EQ(r.samples, 4000u);
}

TEST(EvaluatePolicy, DeterministicAndStderrScaling) {
  const auto setup = small_setup(8);
  Rng rng{3};
  const auto p = PolicyParameters::initialize(PolicyShape{4, 3, 3, false}, InitScheme::kUniformFanIn, rng);
  const auto a = evaluate_policy(p, setup, 500, 17);
  const auto b = evaluate_policy(p, setup, 500, 17);
  EXPECT_EQ(a.sum_capacity, b.sum_capacity);
  EXPECT_EQ(a.total_power, b.total_power);
  const auto big = evaluate_policy(p, setup, 2000, 17);
  // Quadrupling N halves the standard error; doubling shrinks it by about sqrt(2).
  const auto twice = evaluate_policy(p, setup, 1000, 17);
  const double ratio = a.sum_capacity_stderr / twice.sum_capacity_stderr;
  EXPECT_GT(ratio, 1.2);
  EXPECT_LT(ratio, 1.65);
  EXPECT_NEAR(a.sum_capacity_stderr / big.sum_capacity_stderr, 2.0, 0.35);
  EXPECT_THROW(evaluate_policy(p, setup, 0, 1), InvalidArgument);
}

}  // namespace
}  // namespace agnn

#include "agnn/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "agnn/errors.hpp"

namespace agnn {

namespace {

double sum_rate(const Matrix& gain2, const Vector& v, double noise) {
  const Vector p = v.array().square();
  const Vector received = gain2 * p;
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double signal = gain2(i, i) * p(i);
    total += std::log2(1.0 + signal / (noise + std::max(received(i) - signal, 0.0)));
  }
  return total;
}

}  // namespace

WmmseResult wmmse(const Matrix& H, std::size_t iterations, double p0, double noise_power,
                  const WmmseOptions& options) {
  if (H.rows() != H.cols()) throw InvalidArgument("wmmse: H must be square");
  if (iterations == 0) throw InvalidArgument("wmmse: iteration budget must be >= 1");
  if (!(p0 > 0.0) || !(noise_power > 0.0)) throw InvalidArgument("wmmse: p0 and noise power must be > 0");
  if ((H.array() < 0.0).any()) throw InvalidArgument("wmmse: H must be nonnegative");

  const Eigen::Index m = H.rows();
  // Squared amplitude gains g_ij^2 = h_ij of the links WMMSE may use.
  Matrix g2 = H;
  if (options.neighborhood_only)
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        if (i != j && H(i, j) < options.h_eps) g2(i, j) = 0.0;
  const Vector g_direct = g2.diagonal().cwiseSqrt();
  const double v_max = std::sqrt(p0);

  WmmseResult res;
  WmmseState& st = res.state;
  st.v = Vector::Constant(m, v_max / 2.0);
  st.u = Vector::Zero(m);
  st.w = Vector::Zero(m);
  auto guarded = [&res, &options](double d) {
    if (d < options.floor) {
      ++res.floored_denominators;
      return options.floor;
    }
    return d;
  };

  res.sum_rate_history.push_back(sum_rate(g2, st.v, noise_power));
  for (std::size_t it = 0; it < iterations; ++it) {
    const Vector received = g2 * st.v.array().square().matrix();
    for (Eigen::Index i = 0; i < m; ++i) {
      st.u(i) = g_direct(i) * st.v(i) / guarded(noise_power + received(i));
      st.w(i) = 1.0 / guarded(1.0 - st.u(i) * g_direct(i) * st.v(i));
    }
    const Vector wu2 = st.w.array() * st.u.array().square();
    const Vector denom = g2.transpose() * wu2;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double num = st.w(i) * st.u(i) * g_direct(i);
      st.v(i) = std::clamp(num / guarded(denom(i)), 0.0, v_max);
    }
    ++st.iteration;
    res.sum_rate_history.push_back(sum_rate(g2, st.v, noise_power));
  }
  // sqrt(p0)^2 can round above p0.
  res.power = st.v.array().square().min(p0);
  return res;
}

Vector wmmse_k(const Matrix& H, std::size_t iterations, double p0, double noise_power,
               const WmmseOptions& options) {
  return wmmse(H, iterations, p0, noise_power, options).power;
}

Vector equal_allocation(std::size_t m, double p_max) {
  if (m == 0) throw InvalidArgument("equal_allocation: m must be >= 1");
  return Vector::Constant(static_cast<Eigen::Index>(m), p_max / static_cast<double>(m));
}

Vector random_allocation(std::size_t m, double p0, double p_max, Rng& rng) {
  if (m == 0) throw InvalidArgument("random_allocation: m must be >= 1");
  const double prob = p_max / (p0 * static_cast<double>(m));
  if (!(prob >= 0.0) || prob > 1.0)
    throw InvalidArgument("random_allocation: transmit probability P_max/(p0 m) must lie in [0, 1]");
  Vector p(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = uniform01(rng) < prob ? p0 : 0.0;
  return p;
}

}  // namespace agnn

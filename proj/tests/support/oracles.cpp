#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace agnn::oracle {

namespace {

Matrix masked(const Matrix& H, const ActiveSet& active, double h_eps) {
  Matrix out = Matrix::Zero(H.rows(), H.cols());
  for (std::size_t j : active)
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
      const auto col = static_cast<Eigen::Index>(j);
      if (i != col && H(i, col) >= h_eps) out(i, col) = H(i, col);
    }
  return out;
}

}  // namespace

Matrix aggregation_oracle(const std::vector<Matrix>& channels, const std::vector<ActiveSet>& active,
                          const std::vector<Vector>& states, std::size_t hops, double h_eps) {
  const std::size_t len = channels.size();
  if (hops == 0 || len < hops || active.size() != len || states.size() != len)
    throw std::invalid_argument("aggregation_oracle: history shorter than the hop depth");
  const std::size_t t = len - 1;
  const Eigen::Index m = states[0].size();
  Matrix y(m, static_cast<Eigen::Index>(hops));
  for (std::size_t k = 0; k < hops; ++k) {
    Matrix product = Matrix::Identity(m, m);
    for (std::size_t i = 0; i < k; ++i) product = product * masked(channels[t - i], active[t - i], h_eps);
    y.col(static_cast<Eigen::Index>(k)) = product * states[t - k];
  }
  return y;
}

Vector finite_difference_gradient(const std::function<double(const Vector&)>& fn, const Vector& theta, double step) {
  Vector g(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Vector plus = theta, minus = theta;
    plus(i) += step;
    minus(i) -= step;
    g(i) = (fn(plus) - fn(minus)) / (2.0 * step);
  }
  return g;
}

Vector complex_step_gradient(const std::function<std::complex<double>(const std::vector<std::complex<double>>&)>& fn,
                             const Vector& theta, double step) {
  Vector g(theta.size());
  std::vector<std::complex<double>> z(theta.data(), theta.data() + theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    auto zi = z;
    zi[static_cast<std::size_t>(i)] += std::complex<double>(0.0, step);
    g(i) = std::imag(fn(zi)) / step;
  }
  return g;
}

Vector enumerated_objective_gradient(const PolicyParameters& params, const std::vector<Vector>& inputs,
                                     const std::function<double(const std::vector<bool>&)>& weight) {
  const std::size_t m = inputs.size();
  const PolicyShape shape = params.shape();
  std::vector<std::vector<double>> in;
  for (const auto& v : inputs) in.emplace_back(v.data(), v.data() + v.size());
  auto objective = [&](const std::vector<std::complex<double>>& theta) {
    std::vector<std::complex<double>> q(m);
    for (std::size_t i = 0; i < m; ++i) q[i] = reference_sigmoid(reference_logit(theta, shape, in[i]));
    std::complex<double> total(0.0);
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      std::vector<bool> a(m);
      std::complex<double> prob(1.0);
      for (std::size_t i = 0; i < m; ++i) {
        a[i] = (mask >> i) & 1U;
        prob *= a[i] ? q[i] : 1.0 - q[i];
      }
      total += prob * weight(a);
    }
    return total;
  };
  return complex_step_gradient(objective, params.flat());
}

double reference_sum_rate(const Vector& p, const Matrix& H, double noise_power) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    double interference = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j)
      if (j != i) interference += H(i, j) * p(j);
    total += std::log2(1.0 + H(i, i) * p(i) / (noise_power + interference));
  }
  return total;
}

double brute_force_sum_rate(const Matrix& H, double p0, double noise_power, std::size_t levels) {
  const auto m = static_cast<std::size_t>(H.rows());
  std::size_t combos = 1;
  for (std::size_t i = 0; i < m; ++i) combos *= levels;
  double best = 0.0;
  Vector p(H.rows());
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t code = c;
    for (std::size_t i = 0; i < m; ++i) {
      p(static_cast<Eigen::Index>(i)) = p0 * static_cast<double>(code % levels) / static_cast<double>(levels - 1);
      code /= levels;
    }
    best = std::max(best, reference_sum_rate(p, H, noise_power));
  }
  return best;
}

}  // namespace agnn::oracle

namespace agnn::oracle {

std::vector<TraceRow> synchronous_primal_dual(const TrainConfig& cfg, const EvaluationSetup& setup,
                                              const PolicyParameters& initial, PolicyParameters* final_params) {
  const auto m = static_cast<std::size_t>(setup.pathloss.rows());
  TrainingEnvironment env{setup, always_active(m)};
  PolicyParameters A = initial;
  Vector lambda = Vector::Ones(static_cast<Eigen::Index>(m));
  double mu = 0.0;
  Vector r;
  double baseline = 0.0;
  bool have_baseline = false;
  const double eps = cfg.stepsize;
  const double eps_d = cfg.effective_dual_stepsize();
  std::vector<TraceRow> trace;
  for (std::size_t tau = 0; tau < cfg.iterations; ++tau) {
    std::vector<const PolicyParameters*> copies(m, &A);
    const auto batch = draw_batch(env, cfg, copies, tau);
    const double B = static_cast<double>(batch.size());
    Vector f_hat = Vector::Zero(static_cast<Eigen::Index>(m));
    double power_hat = 0.0, mean_w = 0.0;
    const double mu_term = cfg.sign == DualSign::kEnforcing ? -mu : mu;
    for (const auto& s : batch) {
      f_hat += s.f;
      power_hat += s.total_power;
      mean_w += lambda.dot(s.f) + mu_term * s.total_power;
    }
    f_hat *= 1.0 / B;
    power_hat *= 1.0 / B;
    mean_w *= 1.0 / B;
    if (tau == 0) r = f_hat;
    const double b = cfg.baseline && have_baseline ? baseline : 0.0;
    Vector grad = Vector::Zero(static_cast<Eigen::Index>(A.size()));
    for (const auto& s : batch) {
      const double w = lambda.dot(s.f) + mu_term * s.total_power - b;
      if (w == 0.0) continue;
      Vector score = Vector::Zero(grad.size());
      for (const auto& node : s.rollout.nodes)
        if (node.decided) score += backpropagate(node.cache, A, (node.decision.transmit ? 1.0 : 0.0) - node.cache.q);
      grad += w * score;
    }
    grad /= B;
    if (cfg.baseline) {
      baseline = have_baseline ? cfg.baseline_decay * baseline + (1.0 - cfg.baseline_decay) * mean_w : mean_w;
      have_baseline = true;
    }
    TraceRow row;
    row.iteration = tau;
    row.capacity = f_hat.sum();
    row.power = power_hat;
    row.lambda_norm = lambda.norm();
    row.mu = mu;
    const double shrink =
        cfg.decay_horizon == 0 ? 1.0 : 1.0 / (1.0 + static_cast<double>(tau) / static_cast<double>(cfg.decay_horizon));
    const double e = eps * shrink, ed = eps_d * shrink;
    const Vector r_old = r;
    r.array() += ed * (1.0 - lambda.array());
    A.flat() += e * grad;
    lambda = lambda - ed * (f_hat - r_old);
    const double dir = cfg.sign == DualSign::kEnforcing ? 1.0 : -1.0;
    mu = std::max(0.0, mu + dir * ed * (power_hat - cfg.p_max));
    row.param_norm = A.flat().norm();
    trace.push_back(row);
  }
  if (final_params) *final_params = A;
  return trace;
}

}  // namespace agnn::oracle

#include "agnn/trainer.hpp"

#include <cmath>
#include <string>

#include "agnn/errors.hpp"

namespace agnn {

LocalCopyStore::LocalCopyStore(const PolicyParameters& central, std::size_t nodes)
    : central_(central), copies_(nodes, central) {}

void LocalCopyStore::refresh(const ActiveSet& active) {
  for (std::size_t i : active) {
    if (i >= copies_.size()) throw InvalidArgument("LocalCopyStore::refresh: node " + std::to_string(i) + " out of range");
    copies_[i] = central_;
  }
}

std::vector<const PolicyParameters*> LocalCopyStore::copy_pointers() const {
  std::vector<const PolicyParameters*> out;
  out.reserve(copies_.size());
  for (const auto& c : copies_) out.push_back(&c);
  return out;
}

LocalCopyStore local_copy_update(LocalCopyStore store, const ActiveSet& active) {
  store.refresh(active);
  return store;
}

std::string_view to_string(DualSign sign) {
  return sign == DualSign::kEnforcing ? "enforcing" : "literal";
}

DualSign dual_sign_from_string(std::string_view name) {
  if (name == "enforcing") return DualSign::kEnforcing;
  if (name == "literal") return DualSign::kLiteral;
  throw InvalidArgument("unknown dual sign convention '" + std::string(name) + "'");
}

double signed_mu(double mu, DualSign sign) { return sign == DualSign::kEnforcing ? -mu : mu; }

double sample_weight(const RolloutSample& sample, const DualVariables& duals, DualSign sign) {
  return duals.lambda.dot(sample.f) + signed_mu(duals.mu, sign) * sample.total_power;
}

Vector estimate_policy_gradient(const LocalCopyStore& store, std::span<const RolloutSample> batch,
                                const DualVariables& duals, DualSign sign, double baseline) {
  if (batch.empty()) throw InvalidArgument("estimate_policy_gradient: empty batch");
  Vector grad = Vector::Zero(static_cast<Eigen::Index>(store.central().size()));
  for (const RolloutSample& sample : batch) {
    if (sample.rollout.nodes.size() != store.nodes())
      throw InvalidArgument("estimate_policy_gradient: rollout node count does not match the copy store");
    const double w = sample_weight(sample, duals, sign) - baseline;
    if (w == 0.0) continue;
    Vector score = Vector::Zero(grad.size());
    for (std::size_t i = 0; i < sample.rollout.nodes.size(); ++i) {
      const NodeOutcome& node = sample.rollout.nodes[i];
      if (!node.decided) continue;
      score += score_gradient(node.cache, node.decision, store.copy(i));
    }
    grad += w * score;
  }
  return grad / static_cast<double>(batch.size());
}

void primal_step(ErgodicVariables& ergodic, PolicyParameters& params, const Vector& gradient,
                 const DualVariables& duals, double policy_stepsize, double ergodic_stepsize) {
  if (ergodic.r.size() != duals.lambda.size()) throw InvalidArgument("primal_step: r and lambda sizes differ");
  if (gradient.size() != params.flat().size()) throw InvalidArgument("primal_step: gradient size mismatch");
  ergodic.r.array() += ergodic_stepsize * (1.0 - duals.lambda.array());
  params.flat() += policy_stepsize * gradient;
}

DualVariables dual_step(const DualVariables& duals, const Vector& f_hat, double power_hat,
                        const ErgodicVariables& ergodic, double p_max, double stepsize, DualSign sign) {
  if (duals.mu < 0.0) throw InvalidArgument("dual_step: mu must be nonnegative on entry");
  if (f_hat.size() != duals.lambda.size() || ergodic.r.size() != duals.lambda.size())
    throw InvalidArgument("dual_step: dimension mismatch");
  DualVariables next;
  next.lambda = duals.lambda - stepsize * (f_hat - ergodic.r);
  const double direction = sign == DualSign::kEnforcing ? 1.0 : -1.0;
  next.mu = std::max(0.0, duals.mu + direction * stepsize * (power_hat - p_max));
  return next;
}

void TrainConfig::validate(std::size_t hops) const {
  if (!(stepsize >= 0.0) || !(dual_stepsize >= 0.0)) throw InvalidArgument("stepsizes must be >= 0");
  if (batch_size == 0) throw InvalidArgument("batch size must be >= 1");
  if (rollout_length < hops) throw InvalidArgument("rollout length must be >= the hop depth K");
  if (!(divergence_bound > 0.0)) throw InvalidArgument("divergence bound must be > 0");
  if (!(baseline_decay >= 0.0 && baseline_decay < 1.0)) throw InvalidArgument("baseline decay must lie in [0, 1)");
}

std::vector<RolloutSample> draw_batch(const TrainingEnvironment& env, const TrainConfig& cfg,
                                      std::span<const PolicyParameters* const> copies, std::size_t iteration) {
  const EvaluationSetup& setup = env.setup;
  const std::uint64_t root = stream_seed(cfg.seed, "train");
  std::vector<RolloutSample> batch;
  batch.reserve(cfg.batch_size);
  for (std::size_t b = 0; b < cfg.batch_size; ++b) {
    const std::uint64_t index = static_cast<std::uint64_t>(iteration) * cfg.batch_size + b;
    auto streams = sample_streams(root, index);
    Scenario sc = sample_scenario(setup.pathloss, setup.channel, setup.activation, cfg.rollout_length,
                                  streams.fading, streams.activation);
    RolloutSample sample;
    sample.rollout = run_protocol(sc, copies, setup.protocol, streams.decisions);
    sample.channel = std::move(sc.channels.back().H);
    sample.f = link_capacity(sample.rollout.power, sample.channel, setup.channel.noise_power);
    sample.total_power = sample.rollout.power.sum();
    sample.index = index;
    batch.push_back(std::move(sample));
  }
  return batch;
}

TrainResult train_loop(const TrainConfig& cfg, const TrainingEnvironment& env, const PolicyParameters& initial,
                       const TrainObserver& observer) {
  cfg.validate(env.setup.protocol.hops);
  const auto m = static_cast<std::size_t>(env.setup.pathloss.rows());
  const double eps = cfg.stepsize;
  const double eps_dual = cfg.effective_dual_stepsize();
  const std::uint64_t baseline_root = stream_seed(cfg.seed, "train");

  LocalCopyStore store(initial, m);
  DualVariables duals{Vector::Ones(static_cast<Eigen::Index>(m)), 0.0};
  ErgodicVariables ergodic;
  double running_baseline = 0.0;
  bool have_baseline = false;

  TrainResult result;
  result.trace.reserve(cfg.iterations);
  for (std::size_t tau = 0; tau < cfg.iterations; ++tau) {
    Rng copy_rng = make_rng(cfg.seed, "copy-activation", tau);
    store.refresh(sample_active_set(env.copy_activation, copy_rng));

    const auto copies = store.copy_pointers();
    const std::vector<RolloutSample> batch = draw_batch(env, cfg, copies, tau);

    Vector f_hat = Vector::Zero(static_cast<Eigen::Index>(m));
    double power_hat = 0.0;
    double mean_weight = 0.0;
    for (const auto& s : batch) {
      f_hat += s.f;
      power_hat += s.total_power;
      mean_weight += sample_weight(s, duals, cfg.sign);
    }
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    f_hat *= inv_b;
    power_hat *= inv_b;
    mean_weight *= inv_b;
    // r starts at the first estimate of E[f].
    if (tau == 0) ergodic.r = f_hat;

    const double baseline = cfg.baseline && have_baseline ? running_baseline : 0.0;
    const Vector grad = estimate_policy_gradient(store, batch, duals, cfg.sign, baseline);
    if (cfg.baseline) {
      running_baseline = have_baseline ? cfg.baseline_decay * running_baseline + (1.0 - cfg.baseline_decay) * mean_weight
                                       : mean_weight;
      have_baseline = true;
    }

    TraceRow row;
    row.iteration = tau;
    row.capacity = f_hat.sum();
    row.power = power_hat;
    row.lambda_norm = duals.lambda.norm();
    row.mu = duals.mu;
    if (cfg.evaluate_baselines) {
      for (const auto& s : batch) {
        auto streams = sample_streams(baseline_root, s.index);
        const double noise = env.setup.channel.noise_power;
        const double p0 = env.setup.protocol.p0;
        row.wmmse += link_capacity(wmmse_k(s.channel, cfg.wmmse_iterations, p0, noise, cfg.wmmse), s.channel, noise).sum();
        row.equal += link_capacity(equal_allocation(m, cfg.p_max), s.channel, noise).sum();
        row.random += link_capacity(random_allocation(m, p0, cfg.p_max, streams.baseline), s.channel, noise).sum();
      }
      row.wmmse *= inv_b;
      row.equal *= inv_b;
      row.random *= inv_b;
    }

    const ErgodicVariables r_before = ergodic;
    const double scale = cfg.decay(tau);
    primal_step(ergodic, store.central(), grad, duals, eps * scale, eps_dual * scale);
    duals = dual_step(duals, f_hat, power_hat, r_before, cfg.p_max, eps_dual * scale, cfg.sign);

    row.param_norm = store.central().flat().norm();
    if (!std::isfinite(row.param_norm) || row.param_norm > cfg.divergence_bound)
      throw DivergenceError("training diverged at iteration " + std::to_string(tau) + ": |A| = " +
                            std::to_string(row.param_norm) + " exceeds bound " + std::to_string(cfg.divergence_bound));
    result.trace.push_back(row);
    if (observer) observer(row, store);
  }
  result.params = store.central();
  result.duals = duals;
  result.ergodic = ergodic;
  return result;
}

}  // namespace agnn

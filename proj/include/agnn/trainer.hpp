#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "agnn/async_sched.hpp"
#include "agnn/baselines.hpp"
#include "agnn/metrics.hpp"
#include "agnn/policy.hpp"
#include "agnn/rollout.hpp"

namespace agnn {

struct DualVariables {
  Vector lambda;    // multipliers of r = E[f]
  double mu = 0.0;  // multiplier of the total-power budget, kept >= 0
};

struct ErgodicVariables {
  Vector r;
};

/// Central iterate plus the possibly stale copy each node runs.
class LocalCopyStore {
 public:
  LocalCopyStore() = default;
  LocalCopyStore(const PolicyParameters& central, std::size_t nodes);

  PolicyParameters& central() { return central_; }
  const PolicyParameters& central() const { return central_; }
  const PolicyParameters& copy(std::size_t node) const { return copies_.at(node); }
  std::size_t nodes() const { return copies_.size(); }

  /// Active nodes pick up the central iterate; inactive ones keep their copy.
  void refresh(const ActiveSet& active);

  std::vector<const PolicyParameters*> copy_pointers() const;

 private:
  PolicyParameters central_;
  std::vector<PolicyParameters> copies_;
};

LocalCopyStore local_copy_update(LocalCopyStore store, const ActiveSet& active);

/// Sign convention for the power multiplier.
enum class DualSign {
  kEnforcing,  // mu grows when the budget is exceeded and penalises power in the primal step
  kLiteral,    // the printed signs: mu shrinks on violation and rewards power
};

std::string_view to_string(DualSign sign);
DualSign dual_sign_from_string(std::string_view name);

/// Coefficient of grad E[1^T p] in the primal step.
double signed_mu(double mu, DualSign sign);

/// One rollout's contribution to the policy-gradient estimate.
struct RolloutSample {
  RolloutResult rollout;
  Vector f;
  double total_power = 0.0;
  Matrix channel;  // H at the measured slot, shared with the baselines
  std::uint64_t index = 0;
};

/// Scalar REINFORCE weight w = lambda^T f + mu_signed * 1^T p.
double sample_weight(const RolloutSample& sample, const DualVariables& duals, DualSign sign);

/// Batch mean of (w - baseline) * sum_i grad log pi_i, accumulated in the central
/// coordinates. Node i's score is taken under its own copy.
Vector estimate_policy_gradient(const LocalCopyStore& store, std::span<const RolloutSample> batch,
                                const DualVariables& duals, DualSign sign, double baseline = 0.0);

/// r <- r + eps_r (1 - lambda);  A <- A + eps_A * gradient.
void primal_step(ErgodicVariables& ergodic, PolicyParameters& params, const Vector& gradient,
                 const DualVariables& duals, double policy_stepsize, double ergodic_stepsize);

/// lambda <- lambda - eps (f_hat - r);  mu <- [mu +/- eps (power_hat - P_max)]^+.
DualVariables dual_step(const DualVariables& duals, const Vector& f_hat, double power_hat,
                        const ErgodicVariables& ergodic, double p_max, double stepsize, DualSign sign);

struct TrainConfig {
  double stepsize = 1e-3;       // policy parameters
  double dual_stepsize = 0.0;   // r, lambda and mu; 0 means "same as stepsize"
  std::size_t decay_horizon = 0;  // both stepsizes scaled by 1 / (1 + tau / horizon); 0 keeps them constant
  std::size_t batch_size = 32;
  std::size_t iterations = 1000;
  std::size_t rollout_length = 10;
  double p_max = 25.0;
  DualSign sign = DualSign::kEnforcing;
  bool baseline = false;
  double baseline_decay = 0.9;
  double divergence_bound = 1e6;
  bool evaluate_baselines = false;
  std::size_t wmmse_iterations = 5;
  WmmseOptions wmmse;
  std::uint64_t seed = 0;

  double effective_dual_stepsize() const { return dual_stepsize > 0.0 ? dual_stepsize : stepsize; }
  double decay(std::size_t tau) const {
    return decay_horizon == 0 ? 1.0 : 1.0 / (1.0 + static_cast<double>(tau) / static_cast<double>(decay_horizon));
  }
  void validate(std::size_t hops) const;
};

/// Network and activation law the trainer draws rollouts from.
struct TrainingEnvironment {
  EvaluationSetup setup;
  /// Source of A(tau), the nodes that refresh their copy at iteration tau.
  ActivationModel copy_activation;
};

struct TraceRow {
  std::size_t iteration = 0;
  double capacity = 0.0;
  double power = 0.0;
  double lambda_norm = 0.0;
  double mu = 0.0;
  double param_norm = 0.0;
  double wmmse = 0.0;
  double equal = 0.0;
  double random = 0.0;
};

struct TrainResult {
  PolicyParameters params;
  DualVariables duals;
  ErgodicVariables ergodic;
  std::vector<TraceRow> trace;
};

/// Called after every iteration with the row just recorded and the current state.
using TrainObserver = std::function<void(const TraceRow&, const LocalCopyStore&)>;

/// Draws the batch for iteration tau under the given copies.
std::vector<RolloutSample> draw_batch(const TrainingEnvironment& env, const TrainConfig& cfg,
                                      std::span<const PolicyParameters* const> copies, std::size_t iteration);

TrainResult train_loop(const TrainConfig& cfg, const TrainingEnvironment& env, const PolicyParameters& initial,
                       const TrainObserver& observer = {});

}  // namespace agnn

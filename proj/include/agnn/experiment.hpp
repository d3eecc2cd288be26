#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "agnn/async_sched.hpp"
#include "agnn/baselines.hpp"
#include "agnn/metrics.hpp"
#include "agnn/net_model.hpp"
#include "agnn/policy.hpp"
#include "agnn/rollout.hpp"
#include "agnn/trainer.hpp"

namespace agnn {

inline constexpr int kConfigSchemaVersion = 1;

/// Complete description of a run. Serialized as JSON; see README for the schema.
struct ExperimentConfig {
  struct Network {
    std::size_t m = 25;
    ChannelConfig channel;
  } network;

  struct Power {
    double p0 = 2.0;
    double p_max_per_node = 1.0;  // P_max = p_max_per_node * m
  } power;

  struct Activation {
    ActivationMode mode = ActivationMode::kPatterns;
    std::size_t n_act = 5;
    double size_mean = 12.0;  // for a network of network.m nodes; scaled with m elsewhere
    double bernoulli_prob = 0.5;
  } activation;

  struct Policy {
    PolicyShape shape;
    InitScheme init = InitScheme::kUniformFanIn;
    bool include_self_loops = false;
    bool hold_inactive = false;
  } policy;

  struct Training {
    double stepsize = 1e-3;
    double dual_stepsize = 0.0;
    std::size_t decay_horizon = 0;
    std::size_t batch_size = 32;
    std::size_t iterations = 1000;
    std::size_t rollout_length = 10;
    DualSign sign = DualSign::kEnforcing;
    bool baseline = false;
    double baseline_decay = 0.9;
    double divergence_bound = 1e6;
    std::size_t checkpoint_interval = 0;
    bool trace_baselines = true;  // fill the wmmse/equal/random trace columns
  } training;

  struct Wmmse {
    std::size_t iterations = 5;
    bool neighborhood_only = true;
  } wmmse;

  struct Evaluation {
    std::size_t samples = 1000;
    std::vector<std::size_t> transfer_sizes{25, 50, 75};
    std::size_t transfer_networks = 50;
    std::size_t transfer_samples = 200;
    std::size_t perm_nodes = 6;
  } evaluation;

  /// Root seed plus the named streams derived from it.
  struct Seeds {
    std::uint64_t root = 1;
    std::uint64_t topology() const;
    std::uint64_t patterns() const;
    std::uint64_t init() const;
    std::uint64_t training() const;
    std::uint64_t evaluation() const;
    std::uint64_t transfer() const;
    std::uint64_t permutation() const;
  } seeds;

  std::filesystem::path output_dir = "runs/default";

  double p_max(std::size_t m) const { return power.p_max_per_node * static_cast<double>(m); }
  void validate() const;
};

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

/// FNV-1a of the canonical JSON form.
std::string config_hash(const ExperimentConfig& cfg);

/// Written once, before any result file of the run.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string code_version;
  std::string started_at;
  std::map<std::string, std::uint64_t> seeds;
  std::vector<std::string> artifacts;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest make_manifest(const ExperimentConfig& cfg, const std::string& command,
                          std::vector<std::string> artifacts);

// Topology and activation serialization for gen-net.
std::string topology_to_json(const Topology& topology);
Topology topology_from_json(const std::string& text);
std::string patterns_to_json(const ActivationPatternSet& patterns);

/// A concrete network instance drawn from the config.
struct NetworkInstance {
  Topology topology;
  ActivationModel activation;
  EvaluationSetup setup;
};

/// The fixed training network (size network.m, topology and pattern seeds from the config).
NetworkInstance training_network(const ExperimentConfig& cfg);

/// Network of `m` nodes with explicit topology/pattern seeds; pattern sizes scale with m.
NetworkInstance make_network(const ExperimentConfig& cfg, std::size_t m, std::uint64_t topology_seed,
                             std::uint64_t pattern_seed);

TrainConfig train_config(const ExperimentConfig& cfg);

/// Mean/stderr of sum capacity and total power for each method on shared samples.
struct MethodStats {
  RunningStats capacity;
  RunningStats power;
};

struct MethodComparison {
  std::map<std::string, MethodStats> methods;  // agg_gnn, wmmse, equal, random
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

inline const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"agg_gnn", "wmmse", "equal", "random"};
  return names;
}

/// Evaluates the policy and all baselines on the identical channel/activation draws.
MethodComparison compare_methods(const PolicyParameters& params, const NetworkInstance& net,
                                 const ExperimentConfig& cfg, std::size_t samples, std::uint64_t seed);

void write_comparison_csv(const std::filesystem::path& path, const MethodComparison& cmp);
void write_comparison_json(const std::filesystem::path& path, const MethodComparison& cmp);

struct TrainingRun {
  PolicyParameters params;
  TrainResult result;
  MethodComparison final_evaluation;
};

/// Trains on the fixed network and writes model.txt, train_trace.csv, final_eval.{csv,json}
/// and manifest.json into cfg.output_dir.
TrainingRun run_training(const ExperimentConfig& cfg);

/// Evaluates a model on the training network; writes eval.{csv,json}.
MethodComparison run_evaluation(const ExperimentConfig& cfg, const std::filesystem::path& model);

struct TransferRow {
  std::size_t size = 0;
  std::string method;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t networks = 0;
};

struct TransferResult {
  std::vector<TransferRow> summary;
  /// Same-size redraws: per-network mean capacity for each method.
  std::vector<std::map<std::string, double>> histogram;
};

/// Evaluates the same parameters on freshly drawn networks of each size. Writes
/// transfer_summary.csv and transfer_histogram.csv.
TransferResult run_transfer(const ExperimentConfig& cfg, const std::filesystem::path& model);
TransferResult run_transfer(const ExperimentConfig& cfg, const PolicyParameters& params);

struct PermutationFailure {
  std::uint64_t seed = 0;
  std::vector<std::size_t> permutation;
  double discrepancy = 0.0;
};

struct PermutationReport {
  std::size_t trials = 0;
  std::size_t nodes = 0;
  double max_discrepancy = 0.0;
  double tolerance = 1e-9;
  std::vector<PermutationFailure> failures;
  bool passed() const { return failures.empty(); }
};

/// max_i |q(relabelled scenario)_perm[i] - q(scenario)_i| for one explicit relabelling.
double permutation_discrepancy(const PolicyParameters& params, const ProtocolConfig& protocol,
                               const Scenario& scenario, const std::vector<std::size_t>& perm);

/// Relabels random networks and checks that full-rollout probabilities relabel the same way.
PermutationReport run_permutation_test(const PolicyParameters& params, const ExperimentConfig& cfg,
                                       std::size_t trials, std::size_t nodes);
void write_permutation_report(const std::filesystem::path& path, const PermutationReport& report);

/// Turns run artifacts into one CSV per panel: training curve, same-size histogram and
/// capacity versus size. Fails before writing anything if an input is missing.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& run_dir);

}  // namespace agnn

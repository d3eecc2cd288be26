#include "agnn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "agnn/csv.hpp"
#include "agnn/errors.hpp"

#ifndef AGNN_VERSION
#define AGNN_VERSION "dev"
#endif

namespace agnn {

using json = nlohmann::json;

namespace {

// Strict object reader: every key must be consumed, unknown keys are config errors.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }
  ~Section() = default;

  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  Section sub(const char* key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, path_ + "." + key);
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw ConfigError(path_ + ": unknown key '" + item.key() + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class Enum, class Parse>
void read_enum(Section& s, const char* key, Enum& out, Parse parse) {
  std::string name;
  s.read(key, name);
  if (name.empty()) return;
  try {
    out = parse(name);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i)), i - 1);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace

std::uint64_t ExperimentConfig::Seeds::topology() const { return stream_seed(root, "topology"); }
std::uint64_t ExperimentConfig::Seeds::patterns() const { return stream_seed(root, "activation-patterns"); }
std::uint64_t ExperimentConfig::Seeds::init() const { return stream_seed(root, "init"); }
std::uint64_t ExperimentConfig::Seeds::training() const { return stream_seed(root, "training"); }
std::uint64_t ExperimentConfig::Seeds::evaluation() const { return stream_seed(root, "evaluation"); }
std::uint64_t ExperimentConfig::Seeds::transfer() const { return stream_seed(root, "transfer"); }
std::uint64_t ExperimentConfig::Seeds::permutation() const { return stream_seed(root, "permutation"); }

void ExperimentConfig::validate() const {
  try {
    if (network.m == 0) throw InvalidArgument("network.m must be >= 1");
    network.channel.validate();
    if (!(power.p0 > 0.0)) throw InvalidArgument("power.p0 must be > 0");
    if (!(power.p_max_per_node > 0.0) || power.p_max_per_node > power.p0)
      throw InvalidArgument("power.p_max_per_node must lie in (0, p0]");
    if (activation.n_act == 0 || !(activation.size_mean > 0.0))
      throw InvalidArgument("activation needs n_act >= 1 and size_mean > 0");
    if (!(activation.bernoulli_prob >= 0.0 && activation.bernoulli_prob <= 1.0))
      throw InvalidArgument("activation.bernoulli_prob must lie in [0, 1]");
    PolicyParameters probe(policy.shape);
    train_config(*this).validate(policy.shape.hops);
    if (wmmse.iterations == 0) throw InvalidArgument("wmmse.iterations must be >= 1");
    if (evaluation.samples == 0 || evaluation.transfer_samples == 0)
      throw InvalidArgument("evaluation sample counts must be >= 1");
    for (std::size_t s : evaluation.transfer_sizes)
      if (s == 0) throw InvalidArgument("transfer sizes must be >= 1");
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  const auto& ch = c.network.channel;
  j["network"] = {{"m", c.network.m},
                  {"channel",
                   {{"pathloss_exponent", ch.pathloss_exponent},
                    {"fading_scale", ch.fading_scale},
                    {"h_eps", ch.h_eps},
                    {"noise_power", ch.noise_power},
                    {"node_state_law", std::string(to_string(ch.node_state_law))}}}};
  j["power"] = {{"p0", c.power.p0}, {"p_max_per_node", c.power.p_max_per_node}};
  j["activation"] = {{"mode", std::string(to_string(c.activation.mode))},
                     {"n_act", c.activation.n_act},
                     {"size_mean", c.activation.size_mean},
                     {"bernoulli_prob", c.activation.bernoulli_prob}};
  j["policy"] = {{"layers", c.policy.shape.layers},
                 {"taps", c.policy.shape.taps},
                 {"hops", c.policy.shape.hops},
                 {"bias", c.policy.shape.bias},
                 {"init", std::string(to_string(c.policy.init))},
                 {"include_self_loops", c.policy.include_self_loops},
                 {"hold_inactive", c.policy.hold_inactive}};
  const auto& t = c.training;
  j["training"] = {{"stepsize", t.stepsize},
                   {"dual_stepsize", t.dual_stepsize},
                   {"decay_horizon", t.decay_horizon},
                   {"batch_size", t.batch_size},
                   {"iterations", t.iterations},
                   {"rollout_length", t.rollout_length},
                   {"sign", std::string(to_string(t.sign))},
                   {"baseline", t.baseline},
                   {"baseline_decay", t.baseline_decay},
                   {"divergence_bound", t.divergence_bound},
                   {"checkpoint_interval", t.checkpoint_interval},
                   {"trace_baselines", t.trace_baselines}};
  j["wmmse"] = {{"iterations", c.wmmse.iterations}, {"neighborhood_only", c.wmmse.neighborhood_only}};
  const auto& e = c.evaluation;
  j["evaluation"] = {{"samples", e.samples},
                     {"transfer_sizes", e.transfer_sizes},
                     {"transfer_networks", e.transfer_networks},
                     {"transfer_samples", e.transfer_samples},
                     {"perm_nodes", e.perm_nodes}};
  j["seeds"] = {{"root", c.seeds.root}};
  j["output_dir"] = c.output_dir.string();
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Section root(j, "config");
  int version = kConfigSchemaVersion;
  root.read("schema_version", version);
  if (version != kConfigSchemaVersion)
    throw ConfigError("unsupported config schema_version " + std::to_string(version));

  Section net = root.sub("network");
  net.read("m", c.network.m);
  Section ch = net.sub("channel");
  ch.read("pathloss_exponent", c.network.channel.pathloss_exponent);
  ch.read("fading_scale", c.network.channel.fading_scale);
  ch.read("h_eps", c.network.channel.h_eps);
  ch.read("noise_power", c.network.channel.noise_power);
  read_enum(ch, "node_state_law", c.network.channel.node_state_law, node_state_law_from_string);
  ch.finish();
  net.finish();

  Section pw = root.sub("power");
  pw.read("p0", c.power.p0);
  pw.read("p_max_per_node", c.power.p_max_per_node);
  pw.finish();

  Section act = root.sub("activation");
  read_enum(act, "mode", c.activation.mode, activation_mode_from_string);
  act.read("n_act", c.activation.n_act);
  act.read("size_mean", c.activation.size_mean);
  act.read("bernoulli_prob", c.activation.bernoulli_prob);
  act.finish();

  Section pol = root.sub("policy");
  pol.read("layers", c.policy.shape.layers);
  pol.read("taps", c.policy.shape.taps);
  pol.read("hops", c.policy.shape.hops);
  pol.read("bias", c.policy.shape.bias);
  read_enum(pol, "init", c.policy.init, init_scheme_from_string);
  pol.read("include_self_loops", c.policy.include_self_loops);
  pol.read("hold_inactive", c.policy.hold_inactive);
  pol.finish();

  Section tr = root.sub("training");
  tr.read("stepsize", c.training.stepsize);
  tr.read("dual_stepsize", c.training.dual_stepsize);
  tr.read("decay_horizon", c.training.decay_horizon);
  tr.read("batch_size", c.training.batch_size);
  tr.read("iterations", c.training.iterations);
  tr.read("rollout_length", c.training.rollout_length);
  read_enum(tr, "sign", c.training.sign, dual_sign_from_string);
  tr.read("baseline", c.training.baseline);
  tr.read("baseline_decay", c.training.baseline_decay);
  tr.read("divergence_bound", c.training.divergence_bound);
  tr.read("checkpoint_interval", c.training.checkpoint_interval);
  tr.read("trace_baselines", c.training.trace_baselines);
  tr.finish();

  Section wm = root.sub("wmmse");
  wm.read("iterations", c.wmmse.iterations);
  wm.read("neighborhood_only", c.wmmse.neighborhood_only);
  wm.finish();

  Section ev = root.sub("evaluation");
  ev.read("samples", c.evaluation.samples);
  ev.read("transfer_sizes", c.evaluation.transfer_sizes);
  ev.read("transfer_networks", c.evaluation.transfer_networks);
  ev.read("transfer_samples", c.evaluation.transfer_samples);
  ev.read("perm_nodes", c.evaluation.perm_nodes);
  ev.finish();

  Section sd = root.sub("seeds");
  sd.read("root", c.seeds.root);
  sd.finish();

  std::string out = c.output_dir.string();
  root.read("output_dir", out);
  c.output_dir = out;
  root.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
  write_text(path, config_to_json(cfg) + "\n");
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string canonical = json::parse(config_to_json(cfg)).dump();
  const std::uint64_t h = hash_name(canonical);
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RunManifest make_manifest(const ExperimentConfig& cfg, const std::string& command,
                          std::vector<std::string> artifacts) {
  RunManifest m;
  m.command = command;
  m.config_hash = config_hash(cfg);
  m.code_version = AGNN_VERSION;
  m.started_at = now_iso8601();
  const auto& s = cfg.seeds;
  m.seeds = {{"root", s.root},         {"topology", s.topology()},     {"activation_patterns", s.patterns()},
             {"init", s.init()},       {"training", s.training()},     {"evaluation", s.evaluation()},
             {"transfer", s.transfer()}, {"permutation", s.permutation()}};
  m.artifacts = std::move(artifacts);
  return m;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  json j = {{"command", m.command},       {"config_hash", m.config_hash}, {"code_version", m.code_version},
            {"started_at", m.started_at}, {"seeds", m.seeds},             {"artifacts", m.artifacts}};
  write_text(path, j.dump(2) + "\n");
}

std::string topology_to_json(const Topology& t) {
  json j;
  j["tx_pos"] = json::array();
  j["rx_pos"] = json::array();
  for (const auto& p : t.tx_pos) j["tx_pos"].push_back({p.x, p.y});
  for (const auto& p : t.rx_pos) j["rx_pos"].push_back({p.x, p.y});
  j["pairing"] = t.pairing;
  return j.dump(2);
}

Topology topology_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Topology t;
    for (const auto& p : j.at("tx_pos")) t.tx_pos.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    for (const auto& p : j.at("rx_pos")) t.rx_pos.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    t.pairing = j.at("pairing").get<std::vector<std::size_t>>();
    t.validate();
    return t;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid topology JSON: ") + e.what());
  }
}

std::string patterns_to_json(const ActivationPatternSet& patterns) {
  json j = {{"m", patterns.m}, {"patterns", patterns.patterns}};
  return j.dump(2);
}

NetworkInstance make_network(const ExperimentConfig& cfg, std::size_t m, std::uint64_t topology_seed,
                             std::uint64_t pattern_seed) {
  NetworkInstance net;
  net.topology = generate_topology(m, topology_seed);
  net.activation.mode = cfg.activation.mode;
  net.activation.bernoulli_prob = cfg.activation.bernoulli_prob;
  net.activation.patterns.m = m;
  if (cfg.activation.mode == ActivationMode::kPatterns) {
    Rng rng{mix_seed(pattern_seed)};
    const double size_mean =
        cfg.activation.size_mean * static_cast<double>(m) / static_cast<double>(cfg.network.m);
    net.activation.patterns = build_pattern_sets(m, cfg.activation.n_act, size_mean, rng);
  }
  EvaluationSetup& s = net.setup;
  s.pathloss = pathloss_matrix(net.topology, cfg.network.channel.pathloss_exponent);
  s.channel = cfg.network.channel;
  s.activation = net.activation;
  s.protocol.hops = cfg.policy.shape.hops;
  s.protocol.p0 = cfg.power.p0;
  s.protocol.h_eps = cfg.network.channel.h_eps;
  s.protocol.include_self_loops = cfg.policy.include_self_loops;
  s.protocol.hold_inactive = cfg.policy.hold_inactive;
  s.rollout_length = cfg.training.rollout_length;
  s.p_max = cfg.p_max(m);
  return net;
}

NetworkInstance training_network(const ExperimentConfig& cfg) {
  return make_network(cfg, cfg.network.m, cfg.seeds.topology(), cfg.seeds.patterns());
}

TrainConfig train_config(const ExperimentConfig& cfg) {
  TrainConfig t;
  t.stepsize = cfg.training.stepsize;
  t.dual_stepsize = cfg.training.dual_stepsize;
  t.decay_horizon = cfg.training.decay_horizon;
  t.batch_size = cfg.training.batch_size;
  t.iterations = cfg.training.iterations;
  t.rollout_length = cfg.training.rollout_length;
  t.p_max = cfg.p_max(cfg.network.m);
  t.sign = cfg.training.sign;
  t.baseline = cfg.training.baseline;
  t.baseline_decay = cfg.training.baseline_decay;
  t.divergence_bound = cfg.training.divergence_bound;
  t.evaluate_baselines = cfg.training.trace_baselines;
  t.wmmse_iterations = cfg.wmmse.iterations;
  t.wmmse.neighborhood_only = cfg.wmmse.neighborhood_only;
  t.wmmse.h_eps = cfg.network.channel.h_eps;
  t.seed = cfg.seeds.training();
  return t;
}

MethodComparison compare_methods(const PolicyParameters& params, const NetworkInstance& net,
                                 const ExperimentConfig& cfg, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("compare_methods: need at least one sample");
  const EvaluationSetup& setup = net.setup;
  const auto m = static_cast<std::size_t>(setup.pathloss.rows());
  const double noise = setup.channel.noise_power;
  const double p0 = setup.protocol.p0;
  WmmseOptions wopt;
  wopt.neighborhood_only = cfg.wmmse.neighborhood_only;
  wopt.h_eps = setup.channel.h_eps;

  MethodComparison out;
  out.samples = samples;
  out.seed = seed;
  for (const auto& name : method_names()) out.methods[name];
  auto record = [&out, noise](const std::string& method, const Vector& p, const Matrix& H) {
    auto& stats = out.methods[method];
    stats.capacity.add(link_capacity(p, H, noise).sum());
    stats.power.add(p.sum());
  };
  for (std::size_t s = 0; s < samples; ++s) {
    auto streams = sample_streams(seed, s);
    const Scenario sc = sample_scenario(setup.pathloss, setup.channel, setup.activation, setup.rollout_length,
                                        streams.fading, streams.activation);
    const Matrix& H = sc.last().H;
    record("agg_gnn", run_protocol(sc, params, setup.protocol, streams.decisions).power, H);
    record("wmmse", wmmse_k(H, cfg.wmmse.iterations, p0, noise, wopt), H);
    record("equal", equal_allocation(m, setup.p_max), H);
    record("random", random_allocation(m, p0, setup.p_max, streams.baseline), H);
  }
  return out;
}

void write_comparison_csv(const std::filesystem::path& path, const MethodComparison& cmp) {
  CsvWriter csv(path, {"method", "mean_capacity", "stderr_capacity", "mean_power", "stderr_power", "samples"});
  for (const auto& name : method_names()) {
    const auto& st = cmp.methods.at(name);
    csv << name << st.capacity.mean() << st.capacity.stderr_of_mean() << st.power.mean()
        << st.power.stderr_of_mean() << st.capacity.count();
    csv.end_row();
  }
}

void write_comparison_json(const std::filesystem::path& path, const MethodComparison& cmp) {
  json j;
  j["samples"] = cmp.samples;
  j["seed"] = cmp.seed;
  for (const auto& name : method_names()) {
    const auto& st = cmp.methods.at(name);
    j["methods"][name] = {{"capacity", {{"mean", st.capacity.mean()}, {"stderr", st.capacity.stderr_of_mean()}}},
                          {"power", {{"mean", st.power.mean()}, {"stderr", st.power.stderr_of_mean()}}}};
  }
  write_text(path, j.dump(2) + "\n");
}

TrainingRun run_training(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& dir = cfg.output_dir;
  std::filesystem::create_directories(dir);
  write_manifest(dir / "manifest.json",
                 make_manifest(cfg, "train", {"config.json", "model.txt", "train_trace.csv", "final_eval.csv",
                                              "final_eval.json"}));
  save_config(dir / "config.json", cfg);

  const NetworkInstance net = training_network(cfg);
  Rng init_rng{cfg.seeds.init()};
  const PolicyParameters initial = PolicyParameters::initialize(cfg.policy.shape, cfg.policy.init, init_rng);
  const TrainConfig tcfg = train_config(cfg);
  const TrainingEnvironment env{net.setup, net.activation};

  TrainObserver observer;
  if (cfg.training.checkpoint_interval > 0) {
    std::filesystem::create_directories(dir / "checkpoints");
    observer = [&](const TraceRow& row, const LocalCopyStore& store) {
      if ((row.iteration + 1) % cfg.training.checkpoint_interval != 0) return;
      std::ostringstream name;
      name << "model_iter_" << std::setw(6) << std::setfill('0') << row.iteration + 1 << ".txt";
      save_model(dir / "checkpoints" / name.str(), store.central());
    };
  }

  TrainingRun run;
  run.result = train_loop(tcfg, env, initial, observer);
  run.params = cfg.training.iterations == 0 ? initial : run.result.params;
  save_model(dir / "model.txt", run.params);

  CsvWriter trace(dir / "train_trace.csv",
                  {"iteration", "capacity", "power", "lambda_norm", "mu", "param_norm", "wmmse", "equal", "random"});
  for (const auto& r : run.result.trace) {
    trace << r.iteration << r.capacity << r.power << r.lambda_norm << r.mu << r.param_norm << r.wmmse << r.equal
          << r.random;
    trace.end_row();
  }
  run.final_evaluation = compare_methods(run.params, net, cfg, cfg.evaluation.samples, cfg.seeds.evaluation());
  write_comparison_csv(dir / "final_eval.csv", run.final_evaluation);
  write_comparison_json(dir / "final_eval.json", run.final_evaluation);
  return run;
}

MethodComparison run_evaluation(const ExperimentConfig& cfg, const std::filesystem::path& model) {
  cfg.validate();
  const PolicyParameters params = load_model(model);
  if (params.shape().hops != cfg.policy.shape.hops)
    throw InvalidArgument("model hop depth does not match the config");
  std::filesystem::create_directories(cfg.output_dir);
  const NetworkInstance net = training_network(cfg);
  const MethodComparison cmp = compare_methods(params, net, cfg, cfg.evaluation.samples, cfg.seeds.evaluation());
  write_comparison_csv(cfg.output_dir / "eval.csv", cmp);
  write_comparison_json(cfg.output_dir / "eval.json", cmp);
  return cmp;
}

TransferResult run_transfer(const ExperimentConfig& cfg, const PolicyParameters& params) {
  cfg.validate();
  if (params.shape().hops != cfg.policy.shape.hops)
    throw InvalidArgument("model hop depth " + std::to_string(params.shape().hops) +
                          " does not match config hop depth " + std::to_string(cfg.policy.shape.hops));
  const auto& dir = cfg.output_dir;
  std::filesystem::create_directories(dir);
  const std::uint64_t root = cfg.seeds.transfer();

  TransferResult result;
  for (std::size_t size : cfg.evaluation.transfer_sizes) {
    std::map<std::string, RunningStats> across;
    for (std::size_t n = 0; n < cfg.evaluation.transfer_networks; ++n) {
      const std::uint64_t index = (static_cast<std::uint64_t>(size) << 32) | n;
      const NetworkInstance net =
          make_network(cfg, size, stream_seed(root, "topology", index), stream_seed(root, "patterns", index));
      const MethodComparison cmp =
          compare_methods(params, net, cfg, cfg.evaluation.transfer_samples, stream_seed(root, "samples", index));
      std::map<std::string, double> row;
      for (const auto& name : method_names()) {
        const double mean = cmp.methods.at(name).capacity.mean();
        across[name].add(mean);
        row[name] = mean;
      }
      if (size == cfg.network.m) result.histogram.push_back(std::move(row));
    }
    for (const auto& name : method_names())
      result.summary.push_back({size, name, across[name].mean(), across[name].stderr_of_mean(),
                                across[name].count()});
  }

  CsvWriter summary(dir / "transfer_summary.csv", {"size", "method", "mean", "stderr", "networks"});
  for (const auto& r : result.summary) {
    summary << r.size << r.method << r.mean << r.std_error << r.networks;
    summary.end_row();
  }
  std::vector<std::string> header{"network"};
  for (const auto& name : method_names()) header.push_back(name);
  CsvWriter hist(dir / "transfer_histogram.csv", header);
  for (std::size_t n = 0; n < result.histogram.size(); ++n) {
    hist << n;
    for (const auto& name : method_names()) hist << result.histogram[n].at(name);
    hist.end_row();
  }
  return result;
}

TransferResult run_transfer(const ExperimentConfig& cfg, const std::filesystem::path& model) {
  return run_transfer(cfg, load_model(model));
}

double permutation_discrepancy(const PolicyParameters& params, const ProtocolConfig& protocol,
                               const Scenario& scenario, const std::vector<std::size_t>& perm) {
  // Probabilities do not depend on the decision stream; the same seed keeps both runs aligned anyway.
  Rng d1{0x5eed}, d2{0x5eed};
  const Vector q = run_protocol(scenario, params, protocol, d1).q;
  const Vector q_hat = run_protocol(permute(scenario, perm), params, protocol, d2).q;
  return (q_hat - permute_vector(q, perm)).cwiseAbs().maxCoeff();
}

PermutationReport run_permutation_test(const PolicyParameters& params, const ExperimentConfig& cfg,
                                       std::size_t trials, std::size_t nodes) {
  if (trials == 0) throw InvalidArgument("permutation test needs at least one trial");
  if (nodes == 0) throw InvalidArgument("permutation test needs at least one node");
  PermutationReport report;
  report.trials = trials;
  report.nodes = nodes;
  const std::uint64_t root = cfg.seeds.permutation();
  for (std::size_t k = 0; k < trials; ++k) {
    const std::uint64_t seed = stream_seed(root, "trial", k);
    const NetworkInstance net = make_network(cfg, nodes, seed, stream_seed(seed, "patterns"));
    auto streams = sample_streams(seed, 0);
    const Scenario sc = sample_scenario(net.setup.pathloss, net.setup.channel, net.setup.activation,
                                        net.setup.rollout_length, streams.fading, streams.activation);
    Rng perm_rng = make_rng(seed, "permutation");
    const std::vector<std::size_t> perm = random_permutation(nodes, perm_rng);
    const double delta = permutation_discrepancy(params, net.setup.protocol, sc, perm);
    report.max_discrepancy = std::max(report.max_discrepancy, delta);
    if (!(delta <= report.tolerance)) report.failures.push_back({seed, perm, delta});
  }
  return report;
}

void write_permutation_report(const std::filesystem::path& path, const PermutationReport& r) {
  json j = {{"trials", r.trials},
            {"nodes", r.nodes},
            {"tolerance", r.tolerance},
            {"max_discrepancy", r.max_discrepancy},
            {"passed", r.passed()},
            {"failures", json::array()}};
  for (const auto& f : r.failures)
    j["failures"].push_back({{"seed", f.seed}, {"permutation", f.permutation}, {"discrepancy", f.discrepancy}});
  write_text(path, j.dump(2) + "\n");
}

std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& run_dir) {
  const auto trace_path = run_dir / "train_trace.csv";
  const auto hist_path = run_dir / "transfer_histogram.csv";
  const auto summary_path = run_dir / "transfer_summary.csv";
  std::vector<std::string> missing;
  for (const auto& p : {trace_path, hist_path, summary_path})
    if (!std::filesystem::is_regular_file(p)) missing.push_back(p.filename().string());
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw MissingArtifact("cannot emit plot data from " + run_dir.string() + ": missing " + list +
                          " (run 'train' and 'transfer' into this directory first)");
  }
  // Parse everything before writing so a bad input leaves no partial output.
  const CsvTable trace = read_csv(trace_path);
  const CsvTable hist = read_csv(hist_path);
  const CsvTable summary = read_csv(summary_path);
  const std::size_t it = trace.column("iteration"), cap = trace.column("capacity"), wm = trace.column("wmmse"),
                    eq = trace.column("equal"), rnd = trace.column("random");
  std::vector<std::size_t> hist_cols{hist.column("network")};
  for (const auto& name : method_names()) hist_cols.push_back(hist.column(name));
  const std::size_t sz = summary.column("size"), me = summary.column("method"), mean = summary.column("mean"),
                    se = summary.column("stderr");

  const auto plots = run_dir / "plots";
  std::filesystem::create_directories(plots);
  const std::vector<std::filesystem::path> out{plots / "training_curve.csv", plots / "transfer_histogram.csv",
                                               plots / "size_transfer.csv"};
  {
    CsvWriter csv(out[0], {"iter", "agg_gnn", "wmmse", "equal", "random"});
    for (const auto& r : trace.rows) {
      csv << r.at(it) << r.at(cap) << r.at(wm) << r.at(eq) << r.at(rnd);
      csv.end_row();
    }
  }
  {
    std::vector<std::string> header{"network"};
    for (const auto& name : method_names()) header.push_back(name);
    CsvWriter csv(out[1], header);
    for (const auto& r : hist.rows) {
      for (std::size_t c : hist_cols) csv << r.at(c);
      csv.end_row();
    }
  }
  {
    CsvWriter csv(out[2], {"size", "method", "mean", "stderr"});
    for (const auto& r : summary.rows) {
      csv << r.at(sz) << r.at(me) << r.at(mean) << r.at(se);
      csv.end_row();
    }
  }
  return out;
}

}  // namespace agnn

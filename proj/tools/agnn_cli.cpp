#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "agnn/errors.hpp"
#include "agnn/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> m;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> batch_size;
  std::optional<double> stepsize;
  std::optional<std::size_t> samples;
  std::optional<std::vector<std::size_t>> sizes;
  std::optional<std::size_t> networks;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON config file (defaults are used when omitted)");
  cmd->add_option("-o,--output-dir", o.output_dir, "Output directory");
  cmd->add_option("--seed", o.seed, "Root seed");
  cmd->add_option("--network-size", o.m, "Network size of the training network");
  cmd->add_option("--iterations", o.iterations, "Training iterations");
  cmd->add_option("--batch-size", o.batch_size, "Rollouts per iteration");
  cmd->add_option("--stepsize", o.stepsize, "Policy stepsize");
  cmd->add_option("--samples", o.samples, "Evaluation samples");
  cmd->add_option("--sizes", o.sizes, "Transfer network sizes");
  cmd->add_option("--networks", o.networks, "Transfer networks per size");
}

agnn::ExperimentConfig resolve(const Overrides& o) {
  agnn::ExperimentConfig cfg = o.config.empty() ? agnn::ExperimentConfig{} : agnn::load_config(o.config);
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  if (o.seed) cfg.seeds.root = *o.seed;
  if (o.m) cfg.network.m = *o.m;
  if (o.iterations) cfg.training.iterations = *o.iterations;
  if (o.batch_size) cfg.training.batch_size = *o.batch_size;
  if (o.stepsize) cfg.training.stepsize = *o.stepsize;
  if (o.samples) cfg.evaluation.samples = *o.samples;
  if (o.sizes) cfg.evaluation.transfer_sizes = *o.sizes;
  if (o.networks) cfg.evaluation.transfer_networks = *o.networks;
  cfg.validate();
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw agnn::IoError("cannot write " + path.string());
  out << text << "\n";
}

void print_comparison(const agnn::MethodComparison& cmp) {
  for (const auto& name : agnn::method_names()) {
    const auto& st = cmp.methods.at(name);
    std::printf("%-8s capacity %.6f +- %.6f  power %.4f\n", name.c_str(), st.capacity.mean(),
                st.capacity.stderr_of_mean(), st.power.mean());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous aggregation GNN power allocation experiments"};
  app.set_version_flag("--version", std::string(AGNN_VERSION));
  app.require_subcommand(1);

  Overrides o;
  std::string model;
  std::size_t trials = 100;
  std::optional<std::size_t> perm_nodes;

  auto* gen = app.add_subcommand("gen-net", "Draw the training network and write topology and activation patterns");
  add_common(gen, o);
  auto* train = app.add_subcommand("train", "Train on the fixed network; writes model, trace and final evaluation");
  add_common(train, o);
  auto* eval = app.add_subcommand("eval", "Compare a trained model against the baselines");
  add_common(eval, o);
  eval->add_option("-m,--model", model, "Model file")->required();
  auto* transfer = app.add_subcommand("transfer", "Evaluate a trained model on freshly drawn networks");
  add_common(transfer, o);
  transfer->add_option("-m,--model", model, "Model file")->required();
  auto* perm = app.add_subcommand("perm-test", "Check permutation equivariance of full rollouts");
  add_common(perm, o);
  perm->add_option("-m,--model", model, "Model file")->required();
  perm->add_option("--trials", trials, "Random permutations");
  perm->add_option("--perm-nodes", perm_nodes, "Nodes per test network");
  auto* plots = app.add_subcommand("plots", "Emit one CSV per figure panel from a run directory");
  add_common(plots, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const agnn::ExperimentConfig cfg = resolve(o);
    if (gen->parsed()) {
      std::filesystem::create_directories(cfg.output_dir);
      agnn::write_manifest(cfg.output_dir / "manifest.json",
                           agnn::make_manifest(cfg, "gen-net", {"config.json", "topology.json", "patterns.json"}));
      agnn::save_config(cfg.output_dir / "config.json", cfg);
      const auto net = agnn::training_network(cfg);
      write_file(cfg.output_dir / "topology.json", agnn::topology_to_json(net.topology));
      write_file(cfg.output_dir / "patterns.json", agnn::patterns_to_json(net.activation.patterns));
      std::printf("wrote network of %zu nodes to %s\n", cfg.network.m, cfg.output_dir.c_str());
    } else if (train->parsed()) {
      const auto run = agnn::run_training(cfg);
      std::printf("trained %zu iterations into %s\n", run.result.trace.size(), cfg.output_dir.c_str());
      print_comparison(run.final_evaluation);
    } else if (eval->parsed()) {
      print_comparison(agnn::run_evaluation(cfg, model));
    } else if (transfer->parsed()) {
      std::filesystem::create_directories(cfg.output_dir);
      agnn::write_manifest(cfg.output_dir / "transfer_manifest.json",
                           agnn::make_manifest(cfg, "transfer", {"transfer_summary.csv", "transfer_histogram.csv"}));
      const auto res = agnn::run_transfer(cfg, model);
      for (const auto& r : res.summary)
        std::printf("size %3zu %-8s %.6f +- %.6f\n", r.size, r.method.c_str(), r.mean, r.std_error);
    } else if (perm->parsed()) {
      std::filesystem::create_directories(cfg.output_dir);
      const auto params = agnn::load_model(model);
      const auto report =
          agnn::run_permutation_test(params, cfg, trials, perm_nodes.value_or(cfg.evaluation.perm_nodes));
      agnn::write_permutation_report(cfg.output_dir / "perm_test.json", report);
      std::printf("%s: %zu trials, max discrepancy %.3e (tolerance %.0e)\n", report.passed() ? "PASS" : "FAIL",
                  report.trials, report.max_discrepancy, report.tolerance);
      for (const auto& f : report.failures) std::printf("  failing seed %llu\n", (unsigned long long)f.seed);
      if (!report.passed()) return 1;
    } else if (plots->parsed()) {
      for (const auto& p : agnn::emit_plot_data(cfg.output_dir)) std::printf("wrote %s\n", p.c_str());
    }
  } catch (const agnn::Error& e) {
    std::fprintf(stderr, "error[%s]: %s\n", std::string(agnn::to_string(e.category())).c_str(), e.what());
    return static_cast<int>(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error[io_error]: %s\n", e.what());
    return static_cast<int>(agnn::ErrorCategory::kIo);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error[internal]: %s\n", e.what());
    return 1;
  }
  return 0;
}

// Command-line front end: experiment sweeps and convergence logging.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fedmec/config.hpp"
#include "fedmec/harness.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string sweep;
  std::string schemes;
  std::string seeds;
  int workers = 0;
};

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> items;
  std::string cur;
  for (const char c : text) {
    if (c == ',') {
      if (!cur.empty()) items.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) items.push_back(cur);
  return items;
}

// Loads the config file (or defaults) and applies CLI overrides. Returns
// false after printing the violated invariants.
bool resolve_config(const CommonArgs& args, fedmec::ExperimentConfig& cfg) {
  if (args.config_path.empty()) {
    cfg = fedmec::default_config();
  } else {
    const fedmec::ConfigParseResult parsed = fedmec::load_config_file(args.config_path);
    if (!parsed.ok()) {
      for (const auto& err : parsed.errors) std::fprintf(stderr, "config error: %s\n", err.c_str());
      return false;
    }
    cfg = *parsed.config;
  }
  if (!args.sweep.empty()) cfg.sweep.variable = args.sweep;
  if (!args.schemes.empty()) cfg.schemes = split_csv(args.schemes);
  if (!args.seeds.empty()) {
    cfg.seeds.clear();
    for (const auto& s : split_csv(args.seeds)) {
      cfg.seeds.push_back(std::stoull(s));
    }
  }
  if (args.workers > 0) cfg.workers = args.workers;

  const std::vector<std::string> errors = fedmec::validate(cfg);
  if (!errors.empty()) {
    for (const auto& err : errors) std::fprintf(stderr, "config error: %s\n", err.c_str());
    return false;
  }
  return true;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "config file (key = value lines)");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--schemes", args.schemes, "comma list: fdrl,b1,b2,random");
  cmd->add_option("--seeds", args.seeds, "comma list of seeds");
  cmd->add_option("--workers", args.workers, "parallel jobs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NOMA MEC offloading simulator with federated DDQN agents"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "run the experiment grid");
  add_common(run_cmd, run_args);
  run_cmd->add_option("--sweep", run_args.sweep,
                      "sweep variable: none, f_max, bandwidth, devices");

  CommonArgs conv_args;
  int checkpoint_every = 1;
  CLI::App* conv_cmd =
      app.add_subcommand("convergence", "single federated run, per-epoch log");
  add_common(conv_cmd, conv_args);
  conv_cmd->add_option("--checkpoint-every", checkpoint_every,
                       "rounds between checkpoints (0 disables)");

  CommonArgs print_args;
  CLI::App* print_cmd =
      app.add_subcommand("print-config", "echo the effective configuration");
  add_common(print_cmd, print_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      fedmec::ExperimentConfig cfg;
      if (!resolve_config(run_args, cfg)) return 2;
      fedmec::run_experiment(cfg, run_args.out_dir);
      std::printf("wrote %s/metrics.csv and %s/summary.csv\n",
                  run_args.out_dir.c_str(), run_args.out_dir.c_str());
    } else if (conv_cmd->parsed()) {
      fedmec::ExperimentConfig cfg;
      if (!resolve_config(conv_args, cfg)) return 2;
      fedmec::emit_convergence(cfg, conv_args.out_dir, checkpoint_every);
      std::printf("wrote %s/convergence.csv\n", conv_args.out_dir.c_str());
    } else if (print_cmd->parsed()) {
      fedmec::ExperimentConfig cfg;
      if (!resolve_config(print_args, cfg)) return 2;
      std::printf("scenario: %d BSs, %d devices, %.3g Hz bandwidth, %.3g Hz edge\n",
                  cfg.scenario.num_bs, cfg.scenario.num_devices,
                  cfg.scenario.bandwidth_hz, cfg.scenario.edge_freq_hz);
      std::printf("training: %d episodes x %d steps, lr %.3g, gamma %.3g\n",
                  cfg.training.episodes, cfg.training.steps_per_episode,
                  cfg.training.learning_rate, cfg.training.gamma);
      std::printf("sweep: %s", cfg.sweep.variable.c_str());
      for (const double v : cfg.sweep.values) std::printf(" %.6g", v);
      std::printf("\nseeds:");
      for (const auto s : cfg.seeds) std::printf(" %llu", static_cast<unsigned long long>(s));
      std::printf("\nschemes:");
      for (const auto& s : cfg.schemes) std::printf(" %s", s.c_str());
      std::printf("\nworkers: %d\n", cfg.workers);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

#pragma once

#include <string>
#include <vector>

#include "fedmec/config.hpp"
#include "fedmec/metrics.hpp"

namespace fedmec {

// One training run to execute: a (scheme, sweep value, seed) cell.
struct Job {
  std::string scheme;
  std::string sweep_variable;
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
};

// The sweep grid implied by the config, in canonical (sorted) order.
std::vector<Job> enumerate_jobs(const ExperimentConfig& cfg);

// Config with the sweep variable applied; "none" returns cfg unchanged.
ExperimentConfig apply_sweep(const ExperimentConfig& cfg,
                             const std::string& variable, double value);

struct ExperimentOutput {
  std::vector<MetricsRow> rows;
  std::vector<SummaryRow> summary;
};

// Runs the whole grid (jobs in parallel up to cfg.workers) and merges rows
// by (scheme, sweep value, seed, episode). Pure computation, no files.
ExperimentOutput run_experiment_grid(const ExperimentConfig& cfg);

// run_experiment_grid plus metrics.csv / summary.csv under out_dir.
void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Single federated run logging per-episode loss and utility to
// convergence.csv (columns: epoch,loss,utility) plus per-round checkpoints
// under out_dir/checkpoints when checkpoint_every > 0.
void emit_convergence(const ExperimentConfig& cfg, const std::string& out_dir,
                      int checkpoint_every = 0);

}  // namespace fedmec

#include "fedmec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "fedmec/baselines.hpp"
#include "fedmec/parallel.hpp"

namespace fedmec {

ExperimentConfig apply_sweep(const ExperimentConfig& cfg,
                             const std::string& variable, double value) {
  ExperimentConfig out = cfg;
  if (variable == "none") return out;
  if (variable == "f_max") {
    out.scenario.edge_freq_hz = value;
  } else if (variable == "bandwidth") {
    out.scenario.bandwidth_hz = value;
  } else if (variable == "devices") {
    out.scenario.num_devices = static_cast<int>(std::llround(value));
  } else {
    throw std::invalid_argument("apply_sweep: unknown variable " + variable);
  }
  return out;
}

std::vector<Job> enumerate_jobs(const ExperimentConfig& cfg) {
  std::vector<std::string> schemes = cfg.schemes;
  std::sort(schemes.begin(), schemes.end());
  schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());

  std::vector<double> values = cfg.sweep.values;
  if (cfg.sweep.variable == "none") values = {0.0};
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<std::uint64_t> seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::vector<Job> jobs;
  for (const auto& scheme : schemes) {
    for (const double value : values) {
      for (const std::uint64_t seed : seeds) {
        jobs.push_back(Job{scheme, cfg.sweep.variable, value, seed});
      }
    }
  }
  return jobs;
}

ExperimentOutput run_experiment_grid(const ExperimentConfig& cfg) {
  const std::vector<Job> jobs = enumerate_jobs(cfg);
  std::vector<std::vector<MetricsRow>> per_job(jobs.size());
  std::vector<double> final_utility(jobs.size(), 0.0);

  parallel_for(jobs.size(), cfg.workers, [&](std::size_t j) {
    const Job& job = jobs[j];
    const ExperimentConfig run_cfg =
        apply_sweep(cfg, job.sweep_variable, job.sweep_value);
    const TrainResult run = run_scheme(job.scheme, run_cfg, job.seed);
    std::vector<MetricsRow> rows;
    rows.reserve(run.episodes.size());
    for (const EpisodeMetrics& em : run.episodes) {
      MetricsRow row;
      row.scheme = job.scheme;
      row.sweep_variable = job.sweep_variable;
      row.sweep_value = job.sweep_value;
      row.seed = job.seed;
      row.episode = em.episode;
      row.utility = em.utility;
      row.latency_s = em.latency_s;
      row.energy_j = em.energy_j;
      row.drop_rate = em.drop_rate;
      row.deadline_rate = em.deadline_rate;
      row.loss = em.loss;
      rows.push_back(std::move(row));
    }
    per_job[j] = std::move(rows);
    final_utility[j] = final_window_utility(run.episodes);
  });

  ExperimentOutput out;
  for (auto& rows : per_job) {
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  }

  // jobs are already enumerated in sort order; aggregate seeds per cell
  std::size_t j = 0;
  while (j < jobs.size()) {
    std::size_t end = j;
    while (end < jobs.size() && jobs[end].scheme == jobs[j].scheme &&
           jobs[end].sweep_value == jobs[j].sweep_value) {
      ++end;
    }
    const std::size_t n = end - j;
    double mean = 0.0;
    for (std::size_t i = j; i < end; ++i) mean += final_utility[i];
    mean /= static_cast<double>(n);
    double stderr_v = 0.0;
    if (n > 1) {
      double ss = 0.0;
      for (std::size_t i = j; i < end; ++i) {
        ss += (final_utility[i] - mean) * (final_utility[i] - mean);
      }
      stderr_v = std::sqrt(ss / static_cast<double>(n - 1)) /
                 std::sqrt(static_cast<double>(n));
    }
    out.summary.push_back(SummaryRow{jobs[j].scheme, jobs[j].sweep_variable,
                                     jobs[j].sweep_value, mean, stderr_v,
                                     static_cast<int>(n)});
    j = end;
  }
  return out;
}

void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const ExperimentOutput out = run_experiment_grid(cfg);
  write_text_file(out_dir + "/metrics.csv", render_metrics_csv(out.rows));
  write_text_file(out_dir + "/summary.csv", render_summary_csv(out.summary));
}

void emit_convergence(const ExperimentConfig& cfg, const std::string& out_dir,
                      int checkpoint_every) {
  std::filesystem::create_directories(out_dir);
  const std::uint64_t seed = cfg.seeds.front();

  RunHooks hooks;
  if (checkpoint_every > 0) {
    std::filesystem::create_directories(out_dir + "/checkpoints");
    hooks.on_round_end = [&](int round, const QNetworkParams& aggregated) {
      if ((round + 1) % checkpoint_every != 0) return;
      char name[64];
      std::snprintf(name, sizeof(name), "/checkpoints/round_%05d.fqn", round + 1);
      save_params(aggregated, out_dir + name);
    };
  }

  const TrainResult run =
      run_training(cfg, seed, checkpoint_every > 0 ? &hooks : nullptr);

  std::string csv = "epoch,loss,utility\n";
  for (const EpisodeMetrics& em : run.episodes) {
    csv += std::to_string(em.episode);
    csv.push_back(',');
    csv += format_double(em.loss);
    csv.push_back(',');
    csv += format_double(em.utility);
    csv.push_back('\n');
  }
  write_text_file(out_dir + "/convergence.csv", csv);
}

}  // namespace fedmec

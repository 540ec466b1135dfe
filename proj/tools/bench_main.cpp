// Compares the serial reference paths against the OpenMP ones: per-agent
// training inside a federated run, and job-level parallelism in the harness.
// Outputs must match bit-for-bit; timings show the speedup.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "fedmec/federation.hpp"
#include "fedmec/harness.hpp"
#include "fedmec/parallel.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fedmec::ExperimentConfig bench_config() {
  fedmec::ExperimentConfig cfg;
  cfg.scenario.num_bs = 3;
  cfg.scenario.num_devices = 10;
  cfg.scenario.arena_m = 200.0;
  cfg.scenario.noise_psd_dbm_hz = -160.0;
  cfg.scenario.cycles_per_bit = 2000.0;
  cfg.training.episodes = 30;
  cfg.training.steps_per_episode = 50;
  cfg.training.train_every = 2;
  cfg.seeds = {1, 2};
  cfg.schemes = {"fdrl"};
  return cfg;
}

bool same_metrics(const fedmec::TrainResult& a, const fedmec::TrainResult& b) {
  if (a.episodes.size() != b.episodes.size()) return false;
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    if (a.episodes[i].utility != b.episodes[i].utility) return false;
    if (a.episodes[i].loss != b.episodes[i].loss) return false;
    if (a.episodes[i].latency_s != b.episodes[i].latency_s) return false;
    if (a.episodes[i].energy_j != b.episodes[i].energy_j) return false;
  }
  return true;
}

}  // namespace

int main() {
  const fedmec::ExperimentConfig cfg = bench_config();
  const int threads = fedmec::hardware_workers();
  std::printf("hardware workers: %d\n\n", threads);

  // per-agent training kernel: serial reference vs OpenMP
  {
    fedmec::RunOptions serial{false};
    fedmec::RunOptions parallel{true};

    auto t0 = Clock::now();
    const fedmec::TrainResult ref = fedmec::run_training(cfg, 1, nullptr, serial);
    const double serial_s = seconds_since(t0);

    t0 = Clock::now();
    const fedmec::TrainResult omp = fedmec::run_training(cfg, 1, nullptr, parallel);
    const double parallel_s = seconds_since(t0);

    const bool match = same_metrics(ref, omp);
    std::printf("agent training   serial %.3fs   openmp %.3fs   speedup %.2fx   %s\n",
                serial_s, parallel_s, serial_s / parallel_s,
                match ? "outputs identical" : "OUTPUT MISMATCH");
    if (!match) return 1;
  }

  // harness jobs: one worker vs all workers
  {
    fedmec::ExperimentConfig one = cfg;
    one.workers = 1;
    fedmec::ExperimentConfig many = cfg;
    many.workers = threads;

    auto t0 = Clock::now();
    const fedmec::ExperimentOutput ref = fedmec::run_experiment_grid(one);
    const double serial_s = seconds_since(t0);

    t0 = Clock::now();
    const fedmec::ExperimentOutput omp = fedmec::run_experiment_grid(many);
    const double parallel_s = seconds_since(t0);

    const bool match = fedmec::render_metrics_csv(ref.rows) ==
                       fedmec::render_metrics_csv(omp.rows);
    std::printf("harness jobs     serial %.3fs   openmp %.3fs   speedup %.2fx   %s\n",
                serial_s, parallel_s, serial_s / parallel_s,
                match ? "outputs identical" : "OUTPUT MISMATCH");
    if (!match) return 1;
  }

  return 0;
}

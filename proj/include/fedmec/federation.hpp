#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fedmec/config.hpp"
#include "fedmec/neural.hpp"

namespace fedmec {

struct EpisodeMetrics {
  int episode = 0;        // 1-based
  double utility = 0.0;   // mean normalized cost over steps with activity
  double latency_s = 0.0;  // mean realized latency of completed tasks
  double energy_j = 0.0;
  double drop_rate = 0.0;
  double deadline_rate = 0.0;
  double loss = 0.0;  // mean training loss; 0 when nothing trained
  double epsilon = 0.0;
};

struct TrainResult {
  std::vector<EpisodeMetrics> episodes;
  std::vector<QNetworkParams> device_params;      // final online nets
  std::optional<QNetworkParams> aggregated_params;  // federated runs only
  long transitions_stored = 0;
};

// Observation points for tests and checkpointing; all optional.
struct RunHooks {
  std::function<void(int round, const std::vector<int>& selected)> on_round_start;
  // fires right after the round-start model sync, before any step
  std::function<void(int round, const std::vector<QNetworkParams>& online)> on_round_sync;
  // fires after aggregation (federated runs only)
  std::function<void(int round, const QNetworkParams& aggregated)> on_round_end;
};

struct RunOptions {
  // false forces the serial reference path for the per-agent loops
  bool parallel_agents = true;
};

// Top-k devices by the sample variance of their windowed mobility scalar
// (distance * P_max / F_max); ties go to the lower id. Devices with fewer
// than two samples sit out the round; if nobody is eligible yet the first
// min(k, M) ids are taken so training can start.
std::vector<int> select_devices(const std::vector<std::vector<double>>& history,
                                int k);

// Elementwise mean of the uploads. Addends are sorted before summation and
// accumulated in extended precision, so the result is permutation-invariant
// and aggregating identical uploads reproduces them bit-exactly.
QNetworkParams fedavg(const std::vector<QNetworkParams>& uploads);

// Federated training round loop: broadcast, select, per-device double-DQN
// episodes with convex per-action subsolves, upload, average.
TrainResult run_training(const ExperimentConfig& cfg, std::uint64_t seed,
                         const RunHooks* hooks = nullptr,
                         const RunOptions& options = {});

// Linear decay over the first epsilon_decay_frac of episodes.
double epsilon_at(const TrainingConfig& training, int episode_index);

}  // namespace fedmec

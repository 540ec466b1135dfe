#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fedmec {

struct ScenarioConfig {
  int num_bs = 5;
  int num_devices = 30;
  double bandwidth_hz = 50e6;       // total system bandwidth
  double edge_freq_hz = 30e9;       // computing frequency of each edge server
  double tx_power_w = 0.01;         // device transmit power cap
  double noise_psd_dbm_hz = -90.0;  // noise power spectral density
  double deadline_min_s = 0.01;     // service latency requirement band
  double deadline_max_s = 0.1;
  double antenna_gain_device = 1.0;
  double antenna_gain_bs = 1.0;
  double arena_m = 500.0;
  double mobility_sigma_m = 1.0;
  double arrival_prob = 0.3;
  int queue_cap = 10;
  double lambda = 1.0;  // energy weight in the utility
  double chip_coeff = 1e-27;
  double device_freq_hz = 1e8;   // local CPU cap of a device
  double device_energy_j = 1e-3;  // per-task energy budget of a device
  double path_loss_exponent = 3.5;
  double path_loss_ref_db = 30.0;
  double slot_s = 1e-3;
  double err_prob = 0.1;
  int max_attempts = 5;
  double zero_rate_cap_s = 0.1;
  double bits_min = 1000.0;
  double bits_max = 10000.0;
  double cycles_per_bit = 1000.0;
  bool energy_includes_cycles = false;
  double fading_clip = 10.0;  // state normalization bound for channel gains
};

struct TrainingConfig {
  double learning_rate = 1e-3;
  double gamma = 0.95;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_frac = 0.8;  // fraction of episodes spent decaying
  int batch_size = 64;
  int buffer_capacity = 10000;
  int target_sync_every = 200;  // environment steps between hard target syncs
  int episodes = 500;
  int steps_per_episode = 100;
  double k_fraction = 0.3;  // fraction of devices selected per round
  int hidden1 = 64;
  int hidden2 = 64;
  int train_every = 1;  // environment steps between gradient updates
  int select_window = 20;  // sliding window length of the selection criterion
};

struct SweepConfig {
  std::string variable = "none";  // none | f_max | bandwidth | devices
  std::vector<double> values;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  TrainingConfig training;
  SweepConfig sweep;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::vector<std::string> schemes = {"fdrl"};
  int workers = 1;
};

// Default configuration (the reference simulation parameters).
ExperimentConfig default_config();

struct ConfigParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;

  bool ok() const { return errors.empty() && config.has_value(); }
};

// Parses "key = value" text (one pair per line, # comments). Unset keys keep
// their defaults; unknown keys are errors and name the closest known key.
ConfigParseResult parse_config_text(std::string_view text);
ConfigParseResult load_config_file(const std::string& path);

// Every violated invariant as "key: message".
std::vector<std::string> validate(const ExperimentConfig& cfg);

// Total noise power over a band from a PSD in dBm/Hz.
double noise_power_w(double psd_dbm_hz, double bandwidth_hz);

// state vector layout: queue, per-BS fading, bits, cycles, budgets
int state_dim(const ScenarioConfig& s);
int action_count(const ScenarioConfig& s);  // local + one per BS

}  // namespace fedmec

#pragma once

#include "fedmec/federation.hpp"

namespace fedmec {

// Distributed double DQN without aggregation: every device keeps and trains
// its own model for the whole run.
TrainResult run_baseline1(const ExperimentConfig& cfg, std::uint64_t seed,
                          const RunHooks* hooks = nullptr,
                          const RunOptions& options = {});

// Centralized DQN over the concatenated state of all devices, with a
// factored output head of num_devices x (num_bs + 1) values and per-device
// greedy action slices. Pooled replay, standard (non-double) targets.
TrainResult run_baseline2(const ExperimentConfig& cfg, std::uint64_t seed,
                          const RunHooks* hooks = nullptr,
                          const RunOptions& options = {});

// Uniform random offloading decisions; no learning. Used to normalize
// convergence results.
TrainResult run_random_policy(const ExperimentConfig& cfg, std::uint64_t seed);

// Dispatch by scheme name: fdrl | b1 | b2 | random.
TrainResult run_scheme(const std::string& scheme, const ExperimentConfig& cfg,
                       std::uint64_t seed, const RunHooks* hooks = nullptr,
                       const RunOptions& options = {});

}  // namespace fedmec

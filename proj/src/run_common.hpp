#pragma once

// Internals shared by the federated runner and the baselines.

#include "fedmec/env.hpp"
#include "fedmec/federation.hpp"

namespace fedmec::detail {

struct EpisodeAccumulator {
  double cost_sum = 0.0;
  int steps_with_active = 0;
  double latency_sum = 0.0;
  double energy_sum = 0.0;
  int completed = 0;
  int active_actions = 0;
  int dropped = 0;
  int violations = 0;
  double loss_sum = 0.0;
  int loss_count = 0;

  void add_step(const StepOutcome& out) {
    bool any = false;
    for (std::size_t m = 0; m < out.cost.size(); ++m) {
      if (!out.active[m]) continue;
      any = true;
      ++active_actions;
      const AllocationRecord& rec = out.alloc[m];
      if (rec.dropped) {
        ++dropped;
      } else {
        ++completed;
        latency_sum += rec.latency_s;
        energy_sum += rec.energy_j;
      }
    }
    violations += out.deadline_violations;
    if (any) {
      cost_sum += joint_cost(out);
      ++steps_with_active;
    }
  }

  void add_loss(double loss) {
    loss_sum += loss;
    ++loss_count;
  }

  EpisodeMetrics finish(int episode, double epsilon) const {
    EpisodeMetrics m;
    m.episode = episode;
    m.utility = steps_with_active ? cost_sum / steps_with_active : 0.0;
    m.latency_s = completed ? latency_sum / completed : 0.0;
    m.energy_j = completed ? energy_sum / completed : 0.0;
    m.drop_rate = active_actions ? static_cast<double>(dropped) / active_actions : 0.0;
    m.deadline_rate =
        active_actions ? static_cast<double>(violations) / active_actions : 0.0;
    m.loss = loss_count ? loss_sum / loss_count : 0.0;
    m.epsilon = epsilon;
    return m;
  }
};

// Shared fleet runner; federated toggles selection + aggregation + broadcast.
TrainResult run_ddqn_fleet(const ExperimentConfig& cfg, std::uint64_t seed,
                           bool federated, const RunHooks* hooks,
                           const RunOptions& options);

}  // namespace fedmec::detail

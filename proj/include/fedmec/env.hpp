#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "fedmec/config.hpp"
#include "fedmec/resource.hpp"
#include "fedmec/rng.hpp"

namespace fedmec {

// Per-device observation: queue backlog, per-BS channel gains, the head
// task's size and cycle demand, and the device budgets.
struct AgentState {
  int queue_len = 0;
  std::vector<double> fading;  // one gain per BS
  double task_bits = 0.0;
  double task_cycles = 0.0;
  double energy_budget_j = 0.0;
  double max_freq_hz = 0.0;
};

// bs = -1 processes locally, otherwise offload to that BS.
struct Action {
  int bs = -1;
};

inline int action_index(const Action& a) { return a.bs + 1; }
inline Action action_from_index(int idx) { return Action{idx - 1}; }

// What happened to one device in one step.
struct AllocationRecord {
  bool active = false;
  bool offloaded = false;
  int bs = -1;
  bool solver_feasible = false;
  std::optional<InfeasibleReason> infeasible_reason;
  double f_loc_hz = 0.0;
  double f_grant_hz = 0.0;
  double tx_power_w = 0.0;
  double interference_w = 0.0;
  int attempts = 0;
  bool delivered = false;
  double latency_s = 0.0;  // realized
  double energy_j = 0.0;   // realized
  double raw_cost = 0.0;
  bool dropped = false;
  bool deadline_violated = false;
};

struct StepOutcome {
  std::vector<double> cost;  // normalized to [0, 1]; dropped tasks cost 1
  std::vector<bool> active;
  std::vector<AllocationRecord> alloc;
  int deadline_violations = 0;
  int dropped = 0;
  int overflow_drops = 0;
  std::vector<AgentState> next_states;
};

// Mean normalized cost over the devices that acted this step.
double joint_cost(const StepOutcome& outcome);

// Observation scaled to [0, 1] per feature using the config bounds.
std::vector<double> flatten_state(const AgentState& state,
                                  const ScenarioConfig& scenario);

// The NOMA-coupled offloading MDP. One instance is single-threaded; run
// replicas concurrently by giving each its own instance.
class Environment {
 public:
  Environment(const ExperimentConfig& cfg, std::uint64_t seed);

  // Re-derives every stream from the seed: same seed, same trajectory.
  const std::vector<AgentState>& reset();

  StepOutcome step(const std::vector<Action>& actions);

  const std::vector<AgentState>& states() const { return states_; }
  const std::vector<DeviceProfile>& devices() const { return devices_; }
  const ScenarioConfig& scenario() const { return cfg_.scenario; }
  int num_devices() const { return cfg_.scenario.num_devices; }
  int num_bs() const { return cfg_.scenario.num_bs; }
  double noise_w() const { return noise_w_; }
  long step_count() const { return step_count_; }

  std::pair<double, double> bs_position(int bs) const;
  double distance_to_bs(int device, int bs) const;  // clamped to >= 1 m
  double nearest_bs_distance(int device) const;
  const Task& head_task(int device) const;
  bool queue_empty(int device) const { return queues_[device].empty(); }
  int total_queued() const;

 private:
  Task draw_task(int device);
  void refresh_state(int device);

  ExperimentConfig cfg_;
  std::uint64_t seed_;
  double noise_w_ = 0.0;
  long step_count_ = 0;
  std::vector<DeviceProfile> devices_;
  std::vector<std::deque<Task>> queues_;
  std::vector<std::vector<double>> fading_;  // device x BS
  std::vector<RngStream> state_rng_;
  std::vector<RngStream> tx_rng_;
  std::vector<AgentState> states_;
};

}  // namespace fedmec

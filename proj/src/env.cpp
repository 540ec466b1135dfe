#include "fedmec/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fedmec/channel.hpp"

namespace fedmec {

double joint_cost(const StepOutcome& outcome) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t m = 0; m < outcome.cost.size(); ++m) {
    if (!outcome.active[m]) continue;
    sum += outcome.cost[m];
    ++n;
  }
  return n == 0 ? 0.0 : sum / n;
}

std::vector<double> flatten_state(const AgentState& state,
                                  const ScenarioConfig& s) {
  std::vector<double> v;
  v.reserve(state_dim(s));
  v.push_back(std::clamp(static_cast<double>(state.queue_len) / s.queue_cap, 0.0, 1.0));
  for (const double h : state.fading) {
    v.push_back(std::clamp(h, 0.0, s.fading_clip) / s.fading_clip);
  }
  const double bits_range = std::max(s.bits_max - s.bits_min, 1e-9);
  v.push_back(std::clamp((state.task_bits - s.bits_min) / bits_range, 0.0, 1.0));
  const double cyc_min = s.bits_min * s.cycles_per_bit;
  const double cyc_range = std::max(s.bits_max * s.cycles_per_bit - cyc_min, 1e-9);
  v.push_back(std::clamp((state.task_cycles - cyc_min) / cyc_range, 0.0, 1.0));
  v.push_back(std::clamp(state.energy_budget_j / s.device_energy_j, 0.0, 1.0));
  v.push_back(std::clamp(state.max_freq_hz / s.device_freq_hz, 0.0, 1.0));
  return v;
}

Environment::Environment(const ExperimentConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), seed_(seed) {
  noise_w_ = noise_power_w(cfg_.scenario.noise_psd_dbm_hz, cfg_.scenario.bandwidth_hz);
  reset();
}

std::pair<double, double> Environment::bs_position(int bs) const {
  // fixed grid over the arena
  const int n = cfg_.scenario.num_bs;
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int rows = (n + cols - 1) / cols;
  const int col = bs % cols;
  const int row = bs / cols;
  const double cell_w = cfg_.scenario.arena_m / cols;
  const double cell_h = cfg_.scenario.arena_m / rows;
  return {(col + 0.5) * cell_w, (row + 0.5) * cell_h};
}

double Environment::distance_to_bs(int device, int bs) const {
  const auto [bx, by] = bs_position(bs);
  const double dx = devices_[device].pos_x_m - bx;
  const double dy = devices_[device].pos_y_m - by;
  return std::max(1.0, std::sqrt(dx * dx + dy * dy));
}

double Environment::nearest_bs_distance(int device) const {
  double best = distance_to_bs(device, 0);
  for (int n = 1; n < num_bs(); ++n) best = std::min(best, distance_to_bs(device, n));
  return best;
}

const Task& Environment::head_task(int device) const {
  return queues_[device].front();
}

int Environment::total_queued() const {
  int total = 0;
  for (const auto& q : queues_) total += static_cast<int>(q.size());
  return total;
}

Task Environment::draw_task(int device) {
  Task task;
  task.bits = state_rng_[device].uniform(cfg_.scenario.bits_min, cfg_.scenario.bits_max);
  task.cycles = cfg_.scenario.cycles_per_bit * task.bits;
  task.deadline_s =
      state_rng_[device].uniform(cfg_.scenario.deadline_min_s, cfg_.scenario.deadline_max_s);
  task.arrival_step = step_count_;
  return task;
}

void Environment::refresh_state(int device) {
  AgentState& st = states_[device];
  st.queue_len = static_cast<int>(queues_[device].size());
  st.fading = fading_[device];
  if (queues_[device].empty()) {
    st.task_bits = 0.0;
    st.task_cycles = 0.0;
  } else {
    st.task_bits = queues_[device].front().bits;
    st.task_cycles = queues_[device].front().cycles;
  }
  st.energy_budget_j = devices_[device].energy_budget_j;
  st.max_freq_hz = devices_[device].max_freq_hz;
}

const std::vector<AgentState>& Environment::reset() {
  const int m_count = num_devices();
  const int n_count = num_bs();
  step_count_ = 0;

  state_rng_.clear();
  tx_rng_.clear();
  for (int m = 0; m < m_count; ++m) {
    state_rng_.push_back(RngStream::derive(seed_, kTagEnvState, static_cast<std::uint64_t>(m)));
    tx_rng_.push_back(RngStream::derive(seed_, kTagEnvTransmit, static_cast<std::uint64_t>(m)));
  }

  devices_.assign(m_count, DeviceProfile{});
  queues_.assign(m_count, {});
  fading_.assign(m_count, std::vector<double>(n_count, 0.0));
  states_.assign(m_count, AgentState{});

  const ScenarioConfig& s = cfg_.scenario;
  for (int m = 0; m < m_count; ++m) {
    DeviceProfile& dev = devices_[m];
    dev.chip_coeff = s.chip_coeff;
    dev.max_freq_hz = s.device_freq_hz;
    dev.energy_budget_j = s.device_energy_j;
    dev.max_tx_power_w = s.tx_power_w;
    dev.antenna_gain = s.antenna_gain_device;
    dev.pos_x_m = state_rng_[m].uniform(0.0, s.arena_m);
    dev.pos_y_m = state_rng_[m].uniform(0.0, s.arena_m);
    queues_[m].push_back(draw_task(m));
    for (int n = 0; n < n_count; ++n) {
      fading_[m][n] = state_rng_[m].exponential();
    }
    refresh_state(m);
  }
  return states_;
}

StepOutcome Environment::step(const std::vector<Action>& actions) {
  const int m_count = num_devices();
  const int n_count = num_bs();
  const ScenarioConfig& s = cfg_.scenario;
  if (static_cast<int>(actions.size()) != m_count) {
    throw std::invalid_argument("step: one action per device required");
  }

  StepOutcome out;
  out.cost.assign(m_count, 0.0);
  out.active.assign(m_count, false);
  out.alloc.assign(m_count, AllocationRecord{});

  // (a) group offloaders and split the edge budget equally per BS
  std::vector<int> bs_choice(m_count, -1);
  std::vector<int> offload_count(n_count, 0);
  for (int m = 0; m < m_count; ++m) {
    out.active[m] = !queues_[m].empty();
    if (!out.active[m]) continue;
    const int bs = actions[m].bs;
    if (bs < -1 || bs >= n_count) {
      throw std::invalid_argument("step: offload target out of range");
    }
    if (bs >= 0) {
      bs_choice[m] = bs;
      ++offload_count[bs];
    }
  }
  std::vector<double> f_grant(n_count, 0.0);
  for (int n = 0; n < n_count; ++n) {
    if (offload_count[n] > 0) f_grant[n] = s.edge_freq_hz / offload_count[n];
  }

  // (b) SIC interference, received powers taken at the nominal power cap
  std::vector<std::vector<double>> link_gain(m_count, std::vector<double>(n_count, 0.0));
  std::vector<double> nominal_power(m_count, 0.0);
  for (int m = 0; m < m_count; ++m) {
    if (bs_choice[m] < 0) continue;
    nominal_power[m] = s.tx_power_w;
    for (int n = 0; n < n_count; ++n) {
      const double pl = path_loss(distance_to_bs(m, n), s.path_loss_exponent,
                                  s.path_loss_ref_db);
      link_gain[m][n] = s.antenna_gain_device * s.antenna_gain_bs * fading_[m][n] * pl;
    }
  }
  const std::vector<double> interference =
      interference_set(bs_choice, nominal_power, link_gain);

  // (c)-(e) solve, transmit, and price each active device
  for (int m = 0; m < m_count; ++m) {
    if (!out.active[m]) continue;
    const Task task = queues_[m].front();
    AllocationRecord& rec = out.alloc[m];
    rec.active = true;

    double realized_latency = 0.0;
    double realized_energy = 0.0;
    bool completed = false;

    if (bs_choice[m] < 0) {
      const LocalResult res = solve_local(task, devices_[m], s.lambda,
                                          s.energy_includes_cycles);
      if (feasible(res)) {
        const LocalAllocation& alloc = std::get<LocalAllocation>(res);
        rec.solver_feasible = true;
        rec.f_loc_hz = alloc.f_loc_hz;
        realized_latency = alloc.latency_s;
        realized_energy = alloc.energy_j;
        completed = true;
      } else {
        rec.infeasible_reason = std::get<Infeasible>(res).reason;
      }
    } else {
      const int bs = bs_choice[m];
      rec.offloaded = true;
      rec.bs = bs;
      rec.f_grant_hz = f_grant[bs];
      rec.interference_w = interference[m];
      LinkGeometry geom{m, bs, distance_to_bs(m, bs), s.antenna_gain_device,
                        s.antenna_gain_bs};
      const double pl = path_loss(geom.distance_m, s.path_loss_exponent,
                                  s.path_loss_ref_db);
      const LinkSnapshot snap{geom,          pl,       fading_[m][bs],
                              interference[m], noise_w_, s.bandwidth_hz};
      const EdgeResult res =
          solve_edge(task, devices_[m], snap, f_grant[bs], s.lambda);
      if (feasible(res)) {
        const EdgeAllocation& alloc = std::get<EdgeAllocation>(res);
        rec.solver_feasible = true;
        rec.tx_power_w = alloc.tx_power_w;
        const TransmitParams prm{s.bandwidth_hz, noise_w_,     s.slot_s,
                                 s.err_prob,     s.max_attempts, s.zero_rate_cap_s};
        const AirOutcome air = transmit_task(task.bits, alloc.tx_power_w, geom,
                                             pl, interference[m], prm, tx_rng_[m]);
        rec.attempts = air.attempts;
        rec.delivered = air.delivered;
        if (air.delivered) {
          realized_latency = air.latency_s + task.cycles / f_grant[bs];
          realized_energy = air.energy_j;
          completed = true;
        } else {
          realized_latency = air.latency_s;
          realized_energy = air.energy_j;
        }
      } else {
        rec.infeasible_reason = std::get<Infeasible>(res).reason;
      }
    }

    rec.latency_s = realized_latency;
    rec.energy_j = realized_energy;
    rec.raw_cost = realized_latency + s.lambda * realized_energy;
    if (completed) {
      const double scale = task.deadline_s + s.lambda * devices_[m].energy_budget_j;
      out.cost[m] = std::clamp(rec.raw_cost / scale, 0.0, 1.0);
      if (realized_latency > task.deadline_s) {
        rec.deadline_violated = true;
        ++out.deadline_violations;
      }
    } else {
      rec.dropped = true;
      out.cost[m] = 1.0;
      ++out.dropped;
    }
    queues_[m].pop_front();
  }

  // (f) arrivals, mobility and fresh fading
  ++step_count_;
  for (int m = 0; m < m_count; ++m) {
    if (state_rng_[m].uniform01() < s.arrival_prob) {
      const Task task = draw_task(m);
      if (static_cast<int>(queues_[m].size()) >= s.queue_cap) {
        queues_[m].pop_front();  // drop the oldest
        ++out.overflow_drops;
      }
      queues_[m].push_back(task);
    }
    const double dx = state_rng_[m].normal() * s.mobility_sigma_m;
    const double dy = state_rng_[m].normal() * s.mobility_sigma_m;
    devices_[m].pos_x_m = std::clamp(devices_[m].pos_x_m + dx, 0.0, s.arena_m);
    devices_[m].pos_y_m = std::clamp(devices_[m].pos_y_m + dy, 0.0, s.arena_m);
    for (int n = 0; n < n_count; ++n) {
      fading_[m][n] = state_rng_[m].exponential();
    }
    refresh_state(m);
  }

  out.next_states = states_;
  return out;
}

}  // namespace fedmec

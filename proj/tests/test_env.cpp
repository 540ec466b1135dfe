#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "env_oracle.hpp"
#include "fedmec/env.hpp"
#include "test_util.hpp"

using namespace fedmec;

namespace {

ExperimentConfig desk_config() {
  ExperimentConfig cfg = testutil::mini_config();
  return cfg;
}

std::vector<Action> all_local(int m_count) {
  return std::vector<Action>(m_count, Action{-1});
}

bool states_equal(const AgentState& a, const AgentState& b) {
  return a.queue_len == b.queue_len && a.fading == b.fading &&
         a.task_bits == b.task_bits && a.task_cycles == b.task_cycles &&
         a.energy_budget_j == b.energy_budget_j && a.max_freq_hz == b.max_freq_hz;
}

}  // namespace

TEST_CASE("reset produces one state per device with per-BS gains") {
  ExperimentConfig cfg;  // table defaults: 30 devices, 5 BSs
  Environment env(cfg, 1);
  const auto& states = env.states();
  REQUIRE(states.size() == 30);
  for (const auto& st : states) {
    CHECK(st.fading.size() == 5);
    CHECK(st.queue_len == 1);
    CHECK(st.task_bits >= 1000.0);
    CHECK(st.task_bits <= 10000.0);
  }
}

TEST_CASE("reset is seed-deterministic") {
  ExperimentConfig cfg = desk_config();
  Environment a(cfg, 9);
  Environment b(cfg, 9);
  for (int m = 0; m < cfg.scenario.num_devices; ++m) {
    CHECK(states_equal(a.states()[m], b.states()[m]));
  }
  Environment c(cfg, 10);
  bool all_same = true;
  for (int m = 0; m < cfg.scenario.num_devices; ++m) {
    all_same = all_same && states_equal(a.states()[m], c.states()[m]);
  }
  CHECK_FALSE(all_same);
}

TEST_CASE("single-device single-BS degenerate case runs") {
  ExperimentConfig cfg = desk_config();
  cfg.scenario.num_devices = 1;
  cfg.scenario.num_bs = 1;
  Environment env(cfg, 3);
  const StepOutcome out = env.step({Action{0}});
  CHECK(out.cost.size() == 1);
  CHECK(out.active[0]);
}

TEST_CASE("all-local step decouples into per-device closed-form costs") {
  ExperimentConfig cfg = desk_config();
  // generous budget so everything is feasible locally
  cfg.scenario.device_freq_hz = 1e9;
  cfg.scenario.cycles_per_bit = 1000.0;
  Environment env(cfg, 21);
  const int m_count = cfg.scenario.num_devices;

  std::vector<Task> heads;
  for (int m = 0; m < m_count; ++m) heads.push_back(env.head_task(m));
  const StepOutcome out = env.step(all_local(m_count));
  for (int m = 0; m < m_count; ++m) {
    const LocalResult res = solve_local(heads[m], env.devices()[m],
                                        cfg.scenario.lambda,
                                        cfg.scenario.energy_includes_cycles);
    REQUIRE(feasible(res));
    const LocalAllocation alloc = std::get<LocalAllocation>(res);
    const double scale =
        heads[m].deadline_s + cfg.scenario.lambda * cfg.scenario.device_energy_j;
    CHECK(out.cost[m] == std::clamp(alloc.cost / scale, 0.0, 1.0));
    CHECK(out.alloc[m].interference_w == 0.0);
  }
}

TEST_CASE("same-cell offloaders split the edge budget") {
  ExperimentConfig cfg = desk_config();
  cfg.scenario.num_devices = 3;
  Environment env(cfg, 5);
  const StepOutcome out = env.step({Action{0}, Action{0}, Action{-1}});
  CHECK(out.alloc[0].f_grant_hz == cfg.scenario.edge_freq_hz / 2);
  CHECK(out.alloc[1].f_grant_hz == cfg.scenario.edge_freq_hz / 2);
  CHECK_FALSE(out.alloc[2].offloaded);
}

TEST_CASE("adding a local bystander leaves other costs bit-identical") {
  ExperimentConfig small = desk_config();
  small.scenario.num_devices = 2;
  ExperimentConfig big = desk_config();
  big.scenario.num_devices = 3;

  Environment env_small(small, 33);
  Environment env_big(big, 33);
  for (int step = 0; step < 5; ++step) {
    const StepOutcome a = env_small.step({Action{0}, Action{-1}});
    const StepOutcome b = env_big.step({Action{0}, Action{-1}, Action{-1}});
    for (int m = 0; m < 2; ++m) {
      CHECK(a.cost[m] == b.cost[m]);
      CHECK(a.alloc[m].latency_s == b.alloc[m].latency_s);
      CHECK(a.alloc[m].energy_j == b.alloc[m].energy_j);
    }
  }
}

TEST_CASE("queue drains without arrivals") {
  ExperimentConfig cfg = desk_config();
  cfg.scenario.arrival_prob = 0.0;
  Environment env(cfg, 8);
  CHECK(env.total_queued() == cfg.scenario.num_devices);
  const StepOutcome out = env.step(all_local(cfg.scenario.num_devices));
  CHECK(env.total_queued() == 0);
  // further steps are no-ops with zero joint cost
  const StepOutcome idle = env.step(all_local(cfg.scenario.num_devices));
  CHECK(joint_cost(idle) == 0.0);
  for (int m = 0; m < cfg.scenario.num_devices; ++m) CHECK_FALSE(idle.active[m]);
  (void)out;
}

TEST_CASE("queue conservation with guaranteed arrivals") {
  ExperimentConfig cfg = desk_config();
  cfg.scenario.arrival_prob = 1.0;
  Environment env(cfg, 12);
  for (int step = 0; step < 20; ++step) {
    const std::vector<AgentState> before = env.states();
    const StepOutcome out = env.step(all_local(cfg.scenario.num_devices));
    for (int m = 0; m < cfg.scenario.num_devices; ++m) {
      const int popped = out.active[m] ? 1 : 0;
      const int expected =
          std::min(before[m].queue_len - popped + 1, cfg.scenario.queue_cap);
      CHECK(out.next_states[m].queue_len == expected);
    }
  }
}

TEST_CASE("costs stay in the unit interval and drops price at one") {
  ExperimentConfig cfg = desk_config();
  cfg.scenario.num_devices = 6;
  cfg.scenario.err_prob = 0.4;  // provoke undelivered tasks
  Environment env(cfg, 77);
  RngStream action_rng(6);
  for (int step = 0; step < 50; ++step) {
    std::vector<Action> actions(6);
    for (auto& a : actions) {
      a.bs = static_cast<int>(action_rng.uniform_int(cfg.scenario.num_bs + 1)) - 1;
    }
    const StepOutcome out = env.step(actions);
    for (int m = 0; m < 6; ++m) {
      if (!out.active[m]) continue;
      CHECK(out.cost[m] >= 0.0);
      CHECK(out.cost[m] <= 1.0);
      if (out.alloc[m].dropped) CHECK(out.cost[m] == 1.0);
    }
  }
}

TEST_CASE("identical seeds and actions give bit-identical trajectories") {
  ExperimentConfig cfg = desk_config();
  Environment a(cfg, 91);
  Environment b(cfg, 91);
  RngStream action_rng(14);
  for (int step = 0; step < 25; ++step) {
    std::vector<Action> actions(cfg.scenario.num_devices);
    for (auto& act : actions) {
      act.bs = static_cast<int>(action_rng.uniform_int(cfg.scenario.num_bs + 1)) - 1;
    }
    const StepOutcome oa = a.step(actions);
    const StepOutcome ob = b.step(actions);
    CHECK(oa.cost == ob.cost);
    for (int m = 0; m < cfg.scenario.num_devices; ++m) {
      CHECK(states_equal(oa.next_states[m], ob.next_states[m]));
    }
  }
}

TEST_CASE("out-of-range offload target is rejected") {
  ExperimentConfig cfg = desk_config();
  Environment env(cfg, 2);
  std::vector<Action> actions(cfg.scenario.num_devices, Action{-1});
  actions[0].bs = cfg.scenario.num_bs;  // one past the last BS
  CHECK_THROWS_AS(env.step(actions), std::invalid_argument);
}

TEST_CASE("joint cost averages the active devices") {
  StepOutcome out;
  out.cost = {0.2, 0.4, 0.9};
  out.active = {true, true, false};
  CHECK(joint_cost(out) == doctest::Approx(0.3));
  out.active = {false, false, false};
  CHECK(joint_cost(out) == 0.0);
  out.cost = {1.0, 1.0, 1.0};
  out.active = {true, true, true};
  CHECK(joint_cost(out) == 1.0);
}

TEST_CASE("state features normalize into the unit box") {
  ExperimentConfig cfg = desk_config();
  Environment env(cfg, 55);
  for (const auto& st : env.states()) {
    const std::vector<double> flat = flatten_state(st, cfg.scenario);
    REQUIRE(static_cast<int>(flat.size()) == state_dim(cfg.scenario));
    for (const double v : flat) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("first step matches the straight-line oracle bit-exactly") {
  ExperimentConfig cfg = desk_config();
  cfg.scenario.num_devices = 3;
  cfg.scenario.num_bs = 2;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RngStream action_rng(seed * 7919);
    std::vector<Action> actions(3);
    for (auto& a : actions) {
      a.bs = static_cast<int>(action_rng.uniform_int(3)) - 1;
    }
    Environment env(cfg, seed);
    const StepOutcome got = env.step(actions);
    const testoracle::OracleStep want =
        testoracle::oracle_first_step(cfg, seed, actions);
    for (int m = 0; m < 3; ++m) {
      CHECK(got.cost[m] == want.cost[m]);
      CHECK(got.alloc[m].latency_s == want.latency[m]);
      CHECK(got.alloc[m].energy_j == want.energy[m]);
      CHECK(got.alloc[m].dropped == want.dropped[m]);
    }
  }
}

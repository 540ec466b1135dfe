#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <variant>

#include "fedmec/resource.hpp"
#include "fedmec/rng.hpp"

using namespace fedmec;

namespace {

Task make_task(double bits, double cycles, double deadline) {
  Task t;
  t.bits = bits;
  t.cycles = cycles;
  t.deadline_s = deadline;
  return t;
}

DeviceProfile make_dev(double zeta, double f_max, double e_max, double p_max) {
  DeviceProfile d;
  d.chip_coeff = zeta;
  d.max_freq_hz = f_max;
  d.energy_budget_j = e_max;
  d.max_tx_power_w = p_max;
  return d;
}

LinkSnapshot make_link(double distance, double fading, double interference,
                       double noise, double bandwidth) {
  LinkSnapshot link;
  link.geom = LinkGeometry{0, 0, distance, 1.0, 1.0};
  link.path_gain = path_loss(distance, 3.5, 30.0);
  link.fading = fading;
  link.interference_w = interference;
  link.noise_w = noise;
  link.bandwidth_hz = bandwidth;
  return link;
}

struct EdgeInstance {
  Task task;
  DeviceProfile dev;
  LinkSnapshot link;
  double f_grant;
  double lambda;
};

// Instances are drawn away from feasibility knife edges so an exact solver
// and a finite grid cannot disagree on the verdict: either at least two of
// 200 probe powers are feasible with a 2% margin on both constraints, or
// every probe violates one constraint by 2%.
EdgeInstance draw_edge_instance(RngStream& rng) {
  while (true) {
    EdgeInstance inst;
    const double bits = rng.uniform(1e3, 1e4);
    inst.task = make_task(bits, rng.uniform(500.0, 3000.0) * bits,
                          rng.uniform(0.01, 0.1));
    inst.dev = make_dev(1e-27, 1e8, rng.uniform(1e-5, 1e-3), 0.01);
    inst.link = make_link(rng.uniform(5.0, 150.0), rng.exponential(),
                          rng.uniform(0.0, 1e-11), rng.uniform(5e-13, 5e-11),
                          rng.uniform(1e7, 5e7));
    inst.f_grant = rng.uniform(1e9, 3e10);
    inst.lambda = rng.uniform(0.1, 10.0);
    if (inst.link.fading <= 0.0) continue;

    const double tau_comp = inst.task.cycles / inst.f_grant;
    const double coupling = inst.link.fading * inst.link.path_gain;
    const double denom = inst.link.interference_w + inst.link.noise_w;
    int clear_feasible = 0;
    bool all_clear_infeasible = true;
    for (int i = 1; i <= 200; ++i) {
      const double p = inst.dev.max_tx_power_w * i / 200.0;
      const double r = inst.link.bandwidth_hz * std::log2(1.0 + coupling * p / denom);
      const double lat = tau_comp + inst.task.bits / r;
      const double en = inst.task.bits * p / r;
      const bool lat_clear = lat <= 0.98 * inst.task.deadline_s;
      const bool en_clear = en <= 0.98 * inst.dev.energy_budget_j;
      if (lat_clear && en_clear) ++clear_feasible;
      const bool lat_violated = lat > 1.02 * inst.task.deadline_s;
      const bool en_violated = en > 1.02 * inst.dev.energy_budget_j;
      if (!lat_violated && !en_violated) all_clear_infeasible = false;
    }
    if (clear_feasible >= 2 || all_clear_infeasible) return inst;
  }
}

}  // namespace

TEST_CASE("local solve clamps to the CPU cap") {
  // unconstrained minimizer (c / 2 lambda zeta)^(1/3) ~ 7.94e10 sits far
  // above the 2 GHz cap, so the cap is optimal
  const Task task = make_task(1e3, 1e6, 0.01);
  const DeviceProfile dev = make_dev(1e-27, 2e9, 1e-2, 0.01);
  const LocalResult res = solve_local(task, dev, 1.0);
  REQUIRE(feasible(res));
  const LocalAllocation alloc = std::get<LocalAllocation>(res);
  CHECK(alloc.f_loc_hz == 2e9);
  CHECK(alloc.latency_s == doctest::Approx(5e-4).epsilon(1e-12));
  CHECK(alloc.cost == doctest::Approx(5e-4 + 1e-27 * 4e18).epsilon(1e-12));

  const LocalResult oracle = grid_oracle_local(task, dev, 1.0, false, 100000);
  REQUIRE(feasible(oracle));
  CHECK(std::get<LocalAllocation>(oracle).cost >= alloc.cost - 1e-9);
}

TEST_CASE("interior local optimum matches the cube root") {
  const Task task = make_task(1e3, 1e6, 0.1);
  const DeviceProfile dev = make_dev(1e-27, 1e11, 0.1, 0.01);
  const LocalResult res = solve_local(task, dev, 1.0);
  REQUIRE(feasible(res));
  const double expected = std::cbrt(1e6 / (2.0 * 1e-27));
  CHECK(std::get<LocalAllocation>(res).f_loc_hz ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("deadline beyond the CPU cap is infeasible") {
  const Task task = make_task(1e3, 1e6, 1e-4);  // needs 1e10 Hz
  const DeviceProfile dev = make_dev(1e-27, 2e9, 1e-2, 0.01);
  const LocalResult res = solve_local(task, dev, 1.0);
  REQUIRE_FALSE(feasible(res));
  CHECK(std::get<Infeasible>(res).reason == InfeasibleReason::kDeadline);
}

TEST_CASE("energy bound below the deadline demand is infeasible") {
  const Task task = make_task(1e3, 1e6, 1e-3);  // needs 1e9 Hz
  const DeviceProfile dev = make_dev(1e-27, 2e9, 1e-10, 0.01);  // caps at ~3.2e8 Hz
  const LocalResult res = solve_local(task, dev, 1.0);
  REQUIRE_FALSE(feasible(res));
  CHECK(std::get<Infeasible>(res).reason == InfeasibleReason::kEnergy);
}

TEST_CASE("vanishing lambda pushes to the fastest feasible clock") {
  const Task task = make_task(1e3, 1e6, 0.01);
  const DeviceProfile dev = make_dev(1e-27, 2e9, 1e-2, 0.01);
  const LocalResult res = solve_local(task, dev, 1e-12);
  REQUIRE(feasible(res));
  CHECK(std::get<LocalAllocation>(res).f_loc_hz == 2e9);
}

TEST_CASE("local solver beats the grid oracle on random instances") {
  RngStream rng(101);
  int feasible_count = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double bits = rng.uniform(1e3, 1e4);
    const Task task =
        make_task(bits, rng.uniform(100.0, 3000.0) * bits, rng.uniform(0.01, 0.1));
    const DeviceProfile dev =
        make_dev(1e-27, rng.uniform(1e7, 1e10), rng.uniform(1e-6, 1e-1), 0.01);
    const double lambda = rng.uniform(0.1, 10.0);
    const LocalResult got = solve_local(task, dev, lambda);
    const LocalResult oracle = grid_oracle_local(task, dev, lambda, false, 10000);
    REQUIRE(feasible(got) == feasible(oracle));
    if (!feasible(got)) continue;
    ++feasible_count;
    const double solver_cost = std::get<LocalAllocation>(got).cost;
    const double oracle_cost = std::get<LocalAllocation>(oracle).cost;
    CHECK(solver_cost <= oracle_cost + 1e-9);
    // the solver also satisfies its own constraints
    const LocalAllocation alloc = std::get<LocalAllocation>(got);
    CHECK(alloc.f_loc_hz <= dev.max_freq_hz * (1 + 1e-12));
    CHECK(alloc.latency_s <= task.deadline_s * (1 + 1e-12));
    CHECK(alloc.energy_j <= dev.energy_budget_j * (1 + 1e-12));
  }
  CHECK(feasible_count > 100);
}

TEST_CASE("grid refinement closes the local oracle gap monotonically") {
  const Task task = make_task(1e3, 1e6, 0.1);
  const DeviceProfile dev = make_dev(1e-27, 1e11, 0.1, 0.01);
  const double solver_cost =
      std::get<LocalAllocation>(solve_local(task, dev, 1.0)).cost;
  double prev_gap = 1e100;
  for (const int g : {1000, 10000, 100000, 1000000}) {
    const double oracle_cost =
        std::get<LocalAllocation>(grid_oracle_local(task, dev, 1.0, false, g)).cost;
    const double gap = oracle_cost - solver_cost;
    CHECK(gap >= -1e-12);
    CHECK(gap <= prev_gap + 1e-15);
    prev_gap = gap;
  }
}

TEST_CASE("zero lambda maximizes transmit power") {
  const Task task = make_task(5e3, 5e6, 0.1);
  const DeviceProfile dev = make_dev(1e-27, 1e8, 1.0, 0.01);
  const LinkSnapshot link = make_link(30.0, 1.0, 0.0, 5e-13, 50e6);
  const EdgeResult res = solve_edge(task, dev, link, 30e9, 0.0);
  REQUIRE(feasible(res));
  CHECK(std::get<EdgeAllocation>(res).tx_power_w ==
        doctest::Approx(0.01).epsilon(1e-4));
}

TEST_CASE("edge allocation pins the granted frequency") {
  const Task task = make_task(5e3, 5e6, 0.1);
  const DeviceProfile dev = make_dev(1e-27, 1e8, 1e-3, 0.01);
  const LinkSnapshot link = make_link(30.0, 1.0, 0.0, 5e-13, 50e6);
  const EdgeResult res = solve_edge(task, dev, link, 1.5e10, 1.0);
  REQUIRE(feasible(res));
  CHECK(std::get<EdgeAllocation>(res).f_edge_hz == 1.5e10);
}

TEST_CASE("zero energy budget is infeasible") {
  const Task task = make_task(5e3, 5e6, 0.1);
  const DeviceProfile dev = make_dev(1e-27, 1e8, 0.0, 0.01);
  const LinkSnapshot link = make_link(30.0, 1.0, 0.0, 5e-13, 50e6);
  const EdgeResult res = solve_edge(task, dev, link, 30e9, 1.0);
  REQUIRE_FALSE(feasible(res));
  CHECK(std::get<Infeasible>(res).reason == InfeasibleReason::kEnergy);
}

TEST_CASE("dead channel is infeasible") {
  const Task task = make_task(5e3, 5e6, 0.1);
  const DeviceProfile dev = make_dev(1e-27, 1e8, 1e-3, 0.01);
  const LinkSnapshot link = make_link(30.0, 0.0, 0.0, 5e-13, 50e6);
  const EdgeResult res = solve_edge(task, dev, link, 30e9, 1.0);
  REQUIRE_FALSE(feasible(res));
  CHECK(std::get<Infeasible>(res).reason == InfeasibleReason::kCapacity);
}

TEST_CASE("edge solver matches the grid oracle on random instances") {
  RngStream rng(202);
  int feasible_count = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const EdgeInstance inst = draw_edge_instance(rng);
    const EdgeResult got =
        solve_edge(inst.task, inst.dev, inst.link, inst.f_grant, inst.lambda);
    const EdgeResult oracle = grid_oracle_edge(inst.task, inst.dev, inst.link,
                                               inst.f_grant, inst.lambda, 20000);
    REQUIRE(feasible(got) == feasible(oracle));
    if (!feasible(got)) continue;
    ++feasible_count;
    const EdgeAllocation a = std::get<EdgeAllocation>(got);
    const EdgeAllocation b = std::get<EdgeAllocation>(oracle);
    CHECK(a.cost <= b.cost * (1.0 + 1e-4));
    CHECK(a.latency_s <= inst.task.deadline_s * (1 + 1e-9));
    CHECK(a.energy_j <= inst.dev.energy_budget_j * (1 + 1e-9));
    CHECK(a.tx_power_w > 0.0);
    CHECK(a.tx_power_w <= inst.dev.max_tx_power_w * (1 + 1e-12));
  }
  CHECK(feasible_count > 30);
}

TEST_CASE("golden section agrees with a dense grid on unconstrained objectives") {
  RngStream rng(303);
  for (int trial = 0; trial < 50; ++trial) {
    // generous budgets so only the objective shape matters
    const double bits = rng.uniform(1e3, 1e4);
    const Task task = make_task(bits, 2000.0 * bits, 10.0);
    const DeviceProfile dev = make_dev(1e-27, 1e8, 10.0, 0.01);
    const LinkSnapshot link =
        make_link(rng.uniform(5.0, 150.0), rng.exponential() + 1e-6,
                  rng.uniform(0.0, 1e-11), rng.uniform(5e-13, 5e-11), 50e6);
    const double lambda = rng.uniform(0.1, 10.0);
    const EdgeResult got = solve_edge(task, dev, link, 30e9, lambda);
    const EdgeResult oracle = grid_oracle_edge(task, dev, link, 30e9, lambda, 100000);
    REQUIRE(feasible(got));
    REQUIRE(feasible(oracle));
    const double a = std::get<EdgeAllocation>(got).cost;
    const double b = std::get<EdgeAllocation>(oracle).cost;
    CHECK(std::abs(a - b) <= 1e-4 * std::abs(b));
  }
}

TEST_CASE("shrinking budgets never makes an infeasible instance feasible") {
  RngStream rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const EdgeInstance inst = draw_edge_instance(rng);
    const EdgeResult base =
        solve_edge(inst.task, inst.dev, inst.link, inst.f_grant, inst.lambda);
    Task tight_task = inst.task;
    tight_task.deadline_s *= 0.5;
    DeviceProfile tight_dev = inst.dev;
    tight_dev.energy_budget_j *= 0.5;
    const EdgeResult tight =
        solve_edge(tight_task, tight_dev, inst.link, inst.f_grant, inst.lambda);
    if (!feasible(base)) CHECK_FALSE(feasible(tight));
  }
}

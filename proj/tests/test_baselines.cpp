#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fedmec/baselines.hpp"
#include "fedmec/env.hpp"
#include "test_util.hpp"

using namespace fedmec;

TEST_CASE("with one device the non-federated scheme equals the federated one") {
  // a single selected device makes aggregation the identity, so the two
  // parameter trajectories must coincide exactly
  ExperimentConfig cfg = testutil::mini_config();
  cfg.scenario.num_devices = 1;
  cfg.scenario.num_bs = 1;
  cfg.training.episodes = 10;
  const TrainResult fed = run_training(cfg, 3);
  const TrainResult solo = run_baseline1(cfg, 3);
  REQUIRE(fed.episodes.size() == solo.episodes.size());
  for (std::size_t i = 0; i < fed.episodes.size(); ++i) {
    CHECK(fed.episodes[i].utility == solo.episodes[i].utility);
    CHECK(fed.episodes[i].loss == solo.episodes[i].loss);
  }
  CHECK(fed.device_params[0].weights == solo.device_params[0].weights);
  CHECK(fed.device_params[0].biases == solo.device_params[0].biases);
}

TEST_CASE("baseline 1 is seed-deterministic") {
  const ExperimentConfig cfg = testutil::mini_config();
  const TrainResult a = run_baseline1(cfg, 23);
  const TrainResult b = run_baseline1(cfg, 23);
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    CHECK(a.episodes[i].utility == b.episodes[i].utility);
    CHECK(a.episodes[i].loss == b.episodes[i].loss);
  }
}

TEST_CASE("desk-scale baseline 1 run completes and logs a decaying epsilon") {
  ExperimentConfig cfg;  // table defaults: 30 devices, 5 BSs
  cfg.training.episodes = 4;
  cfg.training.steps_per_episode = 10;
  cfg.training.hidden1 = 8;
  cfg.training.hidden2 = 8;
  cfg.training.batch_size = 16;
  const TrainResult run = run_baseline1(cfg, 2);
  REQUIRE(run.episodes.size() == 4);
  for (std::size_t i = 1; i < run.episodes.size(); ++i) {
    CHECK(run.episodes[i].epsilon <= run.episodes[i - 1].epsilon);
  }
  for (const auto& em : run.episodes) {
    CHECK(std::isfinite(em.utility));
    CHECK(em.utility >= 0.0);
    CHECK(em.utility <= 1.0);
  }
}

TEST_CASE("baseline 2 with one device is a single-agent DQN run") {
  ExperimentConfig cfg = testutil::mini_config();
  cfg.scenario.num_devices = 1;
  cfg.scenario.num_bs = 1;
  cfg.training.episodes = 10;
  const TrainResult run = run_baseline2(cfg, 7);
  REQUIRE(run.episodes.size() == 10);
  REQUIRE(run.device_params.size() == 1);
  // factored head: one device, local + one BS
  CHECK(run.device_params[0].sizes.back() == 2);
  for (const auto& em : run.episodes) CHECK(std::isfinite(em.loss));
}

TEST_CASE("baseline 2 pools every stored transition") {
  ExperimentConfig cfg = testutil::mini_config();
  cfg.scenario.arrival_prob = 1.0;  // queues never empty, all devices act
  cfg.training.episodes = 3;
  const TrainResult run = run_baseline2(cfg, 9);
  const long expected = 3L * cfg.training.steps_per_episode *
                        cfg.scenario.num_devices;
  CHECK(run.transitions_stored == expected);
}

TEST_CASE("baseline 2 enforces the desk-scale device cap") {
  ExperimentConfig cfg = testutil::mini_config();
  cfg.scenario.num_devices = 41;
  CHECK_THROWS_AS(run_baseline2(cfg, 1), std::invalid_argument);
}

TEST_CASE("schemes consume identical environment randomness") {
  // device 1 always computes locally; whatever device 0 does must not
  // disturb device 1's trajectory because every device owns its streams
  ExperimentConfig cfg = testutil::mini_config();
  cfg.scenario.num_devices = 2;
  Environment a(cfg, 19);
  Environment b(cfg, 19);
  for (int step = 0; step < 10; ++step) {
    const StepOutcome oa = a.step({Action{-1}, Action{-1}});
    const StepOutcome ob = b.step({Action{step % 2}, Action{-1}});
    CHECK(oa.cost[1] == ob.cost[1]);
    CHECK(oa.next_states[1].fading == ob.next_states[1].fading);
    CHECK(oa.next_states[1].task_bits == ob.next_states[1].task_bits);
  }
}

TEST_CASE("the scheme dispatcher covers the full set") {
  ExperimentConfig cfg = testutil::mini_config();
  cfg.training.episodes = 2;
  cfg.training.steps_per_episode = 5;
  for (const char* scheme : {"fdrl", "b1", "b2", "random"}) {
    const TrainResult run = run_scheme(scheme, cfg, 1);
    CHECK(run.episodes.size() == 2);
  }
  CHECK_THROWS_AS(run_scheme("nope", cfg, 1), std::invalid_argument);
}

TEST_CASE("random policy emits utilities without training") {
  ExperimentConfig cfg = testutil::mini_config();
  cfg.training.episodes = 5;
  const TrainResult run = run_random_policy(cfg, 31);
  REQUIRE(run.episodes.size() == 5);
  for (const auto& em : run.episodes) {
    CHECK(em.loss == 0.0);
    CHECK(em.utility > 0.0);
    CHECK(em.utility <= 1.0);
  }
  CHECK(run.transitions_stored == 0);
}

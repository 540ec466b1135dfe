#include "fedmec/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "run_common.hpp"

namespace fedmec {

TrainResult run_baseline1(const ExperimentConfig& cfg, std::uint64_t seed,
                          const RunHooks* hooks, const RunOptions& options) {
  return detail::run_ddqn_fleet(cfg, seed, /*federated=*/false, hooks, options);
}

TrainResult run_baseline2(const ExperimentConfig& cfg, std::uint64_t seed,
                          const RunHooks* hooks, const RunOptions& options) {
  (void)options;  // single central learner, nothing to fan out
  const ScenarioConfig& sc = cfg.scenario;
  const TrainingConfig& tc = cfg.training;
  const int m_count = sc.num_devices;
  const int actions_n = action_count(sc);
  const int per_state = state_dim(sc);
  if (m_count > 40) {
    throw std::invalid_argument("run_baseline2: joint state capped at 40 devices");
  }

  Environment env(cfg, seed);
  RngStream policy_rng = RngStream::derive(seed, kTagPolicy, 0);
  RngStream init_rng = RngStream::derive(seed, kTagInit, 1);

  const std::vector<int> sizes = {m_count * per_state, tc.hidden1, tc.hidden2,
                                  m_count * actions_n};
  QNetworkParams online = make_network(sizes, init_rng);
  QNetworkParams target = online;
  ReplayBuffer pooled(static_cast<std::size_t>(tc.buffer_capacity));
  AdamState adam = AdamState::like(online);

  const auto joint_flatten = [&](const std::vector<AgentState>& states) {
    std::vector<double> joint;
    joint.reserve(static_cast<std::size_t>(m_count) * per_state);
    for (const AgentState& st : states) {
      const std::vector<double> f = flatten_state(st, sc);
      joint.insert(joint.end(), f.begin(), f.end());
    }
    return joint;
  };

  // non-double factored bootstrap: the target net both picks and prices the
  // next action inside the owning device's output slice
  const auto central_target = [&](const Transition& tr) {
    if (tr.terminal) return tr.cost;
    const int device = tr.action / actions_n;
    const std::vector<double> q = forward(target, tr.next_state);
    const int base = device * actions_n;
    double best = q[base];
    for (int a = 1; a < actions_n; ++a) best = std::min(best, q[base + a]);
    return tr.cost + tc.gamma * best;
  };

  TrainResult result;
  long env_steps = 0;
  for (int ep = 0; ep < tc.episodes; ++ep) {
    const double eps = epsilon_at(tc, ep);
    detail::EpisodeAccumulator acc;
    for (int step = 0; step < tc.steps_per_episode; ++step) {
      const std::vector<AgentState>& states = env.states();
      const std::vector<double> joint = joint_flatten(states);
      const std::vector<double> q = forward(online, joint);

      std::vector<Action> actions(m_count);
      std::vector<int> taken(m_count, -1);
      for (int m = 0; m < m_count; ++m) {
        if (states[m].queue_len == 0) continue;
        int choice;
        if (policy_rng.uniform01() < eps) {
          choice = static_cast<int>(policy_rng.uniform_int(actions_n));
        } else {
          const int base = m * actions_n;
          choice = 0;
          for (int a = 1; a < actions_n; ++a) {
            if (q[base + a] < q[base + choice]) choice = a;
          }
        }
        taken[m] = choice;
        actions[m] = action_from_index(choice);
      }

      const StepOutcome outcome = env.step(actions);
      ++env_steps;
      const bool is_terminal = step + 1 == tc.steps_per_episode;
      const std::vector<double> joint_next = joint_flatten(outcome.next_states);
      for (int m = 0; m < m_count; ++m) {
        if (!outcome.active[m]) continue;
        pooled.push(Transition{joint, m * actions_n + taken[m], outcome.cost[m],
                               joint_next, is_terminal});
        ++result.transitions_stored;
      }

      if (env_steps % tc.train_every == 0 &&
          pooled.size() >= static_cast<std::size_t>(tc.batch_size)) {
        const auto batch =
            pooled.sample(static_cast<std::size_t>(tc.batch_size), policy_rng);
        std::vector<double> targets(batch.size());
        for (std::size_t b = 0; b < batch.size(); ++b) {
          targets[b] = central_target(*batch[b]);
        }
        acc.add_loss(train_step(online, adam, batch, targets, tc.learning_rate));
      }
      if (env_steps % tc.target_sync_every == 0) sync_target(online, target);

      acc.add_step(outcome);
      if (sc.arrival_prob == 0.0 && env.total_queued() == 0) break;
    }
    if (hooks && hooks->on_round_end) hooks->on_round_end(ep, online);
    result.episodes.push_back(acc.finish(ep + 1, eps));
  }
  result.device_params.push_back(online);
  return result;
}

TrainResult run_random_policy(const ExperimentConfig& cfg, std::uint64_t seed) {
  const ScenarioConfig& sc = cfg.scenario;
  const TrainingConfig& tc = cfg.training;
  const int m_count = sc.num_devices;
  const int actions_n = action_count(sc);

  Environment env(cfg, seed);
  RngStream policy_rng = RngStream::derive(seed, kTagPolicy, 0);

  TrainResult result;
  for (int ep = 0; ep < tc.episodes; ++ep) {
    detail::EpisodeAccumulator acc;
    for (int step = 0; step < tc.steps_per_episode; ++step) {
      const std::vector<AgentState>& states = env.states();
      std::vector<Action> actions(m_count);
      for (int m = 0; m < m_count; ++m) {
        if (states[m].queue_len == 0) continue;
        actions[m] =
            action_from_index(static_cast<int>(policy_rng.uniform_int(actions_n)));
      }
      acc.add_step(env.step(actions));
      if (sc.arrival_prob == 0.0 && env.total_queued() == 0) break;
    }
    result.episodes.push_back(acc.finish(ep + 1, 1.0));
  }
  return result;
}

TrainResult run_scheme(const std::string& scheme, const ExperimentConfig& cfg,
                       std::uint64_t seed, const RunHooks* hooks,
                       const RunOptions& options) {
  if (scheme == "fdrl") return run_training(cfg, seed, hooks, options);
  if (scheme == "b1") return run_baseline1(cfg, seed, hooks, options);
  if (scheme == "b2") return run_baseline2(cfg, seed, hooks, options);
  if (scheme == "random") return run_random_policy(cfg, seed);
  throw std::invalid_argument("run_scheme: unknown scheme " + scheme);
}

}  // namespace fedmec

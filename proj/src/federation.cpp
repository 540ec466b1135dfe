#include "fedmec/federation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fedmec/parallel.hpp"
#include "run_common.hpp"

namespace fedmec {

double epsilon_at(const TrainingConfig& training, int episode_index) {
  const double decay_span = training.epsilon_decay_frac * training.episodes;
  if (decay_span <= 0.0 || episode_index >= decay_span) return training.epsilon_end;
  const double frac = static_cast<double>(episode_index) / decay_span;
  return training.epsilon_start +
         (training.epsilon_end - training.epsilon_start) * frac;
}

std::vector<int> select_devices(const std::vector<std::vector<double>>& history,
                                int k) {
  const int m_count = static_cast<int>(history.size());
  if (k < 1 || k > m_count) throw std::invalid_argument("select_devices: bad k");

  struct Ranked {
    int id;
    double variance;
  };
  std::vector<Ranked> eligible;
  for (int m = 0; m < m_count; ++m) {
    const auto& window = history[m];
    if (window.size() < 2) continue;  // cold start, sits out this round
    double mean = 0.0;
    for (const double x : window) mean += x;
    mean /= static_cast<double>(window.size());
    double ss = 0.0;
    for (const double x : window) ss += (x - mean) * (x - mean);
    const double variance = ss / static_cast<double>(window.size() - 1);
    eligible.push_back({m, variance});
  }

  std::vector<int> selected;
  if (eligible.empty()) {
    for (int m = 0; m < std::min(k, m_count); ++m) selected.push_back(m);
    return selected;
  }
  std::sort(eligible.begin(), eligible.end(), [](const Ranked& a, const Ranked& b) {
    if (a.variance != b.variance) return a.variance > b.variance;
    return a.id < b.id;
  });
  const int take = std::min<int>(k, static_cast<int>(eligible.size()));
  for (int i = 0; i < take; ++i) selected.push_back(eligible[i].id);
  std::sort(selected.begin(), selected.end());
  return selected;
}

QNetworkParams fedavg(const std::vector<QNetworkParams>& uploads) {
  if (uploads.empty()) throw std::invalid_argument("fedavg: no uploads");
  for (const auto& u : uploads) {
    if (!u.same_shape(uploads.front())) {
      throw std::invalid_argument("fedavg: upload shape mismatch");
    }
  }
  const std::size_t k = uploads.size();
  QNetworkParams out = uploads.front();
  std::vector<double> addends(k);
  const auto mean_into = [&](auto member, std::size_t layer, std::size_t i) {
    for (std::size_t u = 0; u < k; ++u) addends[u] = (uploads[u].*member)[layer][i];
    std::sort(addends.begin(), addends.end());
    long double acc = 0.0L;
    for (const double v : addends) acc += v;
    return static_cast<double>(acc / static_cast<long double>(k));
  };
  for (std::size_t l = 0; l < out.weights.size(); ++l) {
    for (std::size_t i = 0; i < out.weights[l].size(); ++i) {
      out.weights[l][i] = mean_into(&QNetworkParams::weights, l, i);
    }
    for (std::size_t i = 0; i < out.biases[l].size(); ++i) {
      out.biases[l][i] = mean_into(&QNetworkParams::biases, l, i);
    }
  }
  return out;
}

namespace detail {

TrainResult run_ddqn_fleet(const ExperimentConfig& cfg, std::uint64_t seed,
                           bool federated, const RunHooks* hooks,
                           const RunOptions& options) {
  const ScenarioConfig& sc = cfg.scenario;
  const TrainingConfig& tc = cfg.training;
  const int m_count = sc.num_devices;
  const int actions_n = action_count(sc);

  Environment env(cfg, seed);

  std::vector<RngStream> policy_rng;
  policy_rng.reserve(m_count);
  for (int m = 0; m < m_count; ++m) {
    policy_rng.push_back(RngStream::derive(seed, kTagPolicy, static_cast<std::uint64_t>(m)));
  }
  RngStream init_rng = RngStream::derive(seed, kTagInit, 0);
  const std::vector<int> sizes = {state_dim(sc), tc.hidden1, tc.hidden2, actions_n};
  QNetworkParams aggregated = make_network(sizes, init_rng);

  struct Agent {
    QNetworkParams online;
    QNetworkParams target;
    ReplayBuffer buffer;
    AdamState adam;
  };
  std::vector<Agent> agents;
  agents.reserve(m_count);
  for (int m = 0; m < m_count; ++m) {
    agents.push_back(Agent{aggregated, aggregated,
                           ReplayBuffer(static_cast<std::size_t>(tc.buffer_capacity)),
                           AdamState::like(aggregated)});
  }

  // sliding window of the mobility scalar feeding device selection
  std::vector<std::vector<double>> history(m_count);
  const double mobility_scale = sc.tx_power_w / sc.device_freq_hz;
  for (int m = 0; m < m_count; ++m) {
    history[m].push_back(env.nearest_bs_distance(m) * mobility_scale);
  }
  const auto record_history = [&]() {
    for (int m = 0; m < m_count; ++m) {
      history[m].push_back(env.nearest_bs_distance(m) * mobility_scale);
      if (static_cast<int>(history[m].size()) > tc.select_window) {
        history[m].erase(history[m].begin());
      }
    }
  };

  const int k_selected = std::max(
      1, static_cast<int>(std::ceil(tc.k_fraction * static_cast<double>(m_count))));
  const std::vector<std::uint8_t> all_valid(actions_n, 1);
  const int agent_workers = options.parallel_agents ? hardware_workers() : 1;

  TrainResult result;
  long env_steps = 0;

  std::vector<int> everyone(m_count);
  for (int m = 0; m < m_count; ++m) everyone[m] = m;

  for (int ep = 0; ep < tc.episodes; ++ep) {
    const double eps = epsilon_at(tc, ep);
    const std::vector<int> selected =
        federated ? select_devices(history, k_selected) : everyone;
    std::vector<std::uint8_t> is_selected(m_count, 0);
    for (const int m : selected) is_selected[m] = 1;

    // round start: broadcast and hard-sync the targets
    for (int m = 0; m < m_count; ++m) {
      if (federated) agents[m].online = aggregated;
      agents[m].target = agents[m].online;
    }
    if (hooks && hooks->on_round_start) hooks->on_round_start(ep, selected);
    if (hooks && hooks->on_round_sync) {
      std::vector<QNetworkParams> online;
      online.reserve(m_count);
      for (const auto& a : agents) online.push_back(a.online);
      hooks->on_round_sync(ep, online);
    }

    EpisodeAccumulator acc;
    for (int step = 0; step < tc.steps_per_episode; ++step) {
      const std::vector<AgentState>& states = env.states();
      std::vector<Action> actions(m_count);
      std::vector<std::vector<double>> flat(m_count);
      std::vector<int> taken(m_count, -1);
      for (int m = 0; m < m_count; ++m) {
        if (states[m].queue_len == 0) continue;
        flat[m] = flatten_state(states[m], sc);
        // non-selected devices act greedily on the frozen broadcast model
        const double eps_m = is_selected[m] ? eps : (federated ? 0.0 : eps);
        taken[m] = act(agents[m].online, flat[m], eps_m, policy_rng[m], all_valid);
        actions[m] = action_from_index(taken[m]);
      }

      const StepOutcome outcome = env.step(actions);
      ++env_steps;
      const bool is_terminal = step + 1 == tc.steps_per_episode;

      for (const int m : selected) {
        if (!outcome.active[m]) continue;
        agents[m].buffer.push(Transition{flat[m], taken[m], outcome.cost[m],
                                         flatten_state(outcome.next_states[m], sc),
                                         is_terminal});
        ++result.transitions_stored;
      }

      if (env_steps % tc.train_every == 0) {
        std::vector<double> losses(selected.size(), 0.0);
        std::vector<std::uint8_t> trained(selected.size(), 0);
        parallel_for(selected.size(), agent_workers, [&](std::size_t i) {
          Agent& agent = agents[selected[i]];
          if (agent.buffer.size() < static_cast<std::size_t>(tc.batch_size)) return;
          const auto batch = agent.buffer.sample(
              static_cast<std::size_t>(tc.batch_size), policy_rng[selected[i]]);
          std::vector<double> targets(batch.size());
          for (std::size_t b = 0; b < batch.size(); ++b) {
            targets[b] = ddqn_target(*batch[b], agent.online, agent.target, tc.gamma);
          }
          losses[i] = train_step(agent.online, agent.adam, batch, targets,
                                 tc.learning_rate);
          trained[i] = 1;
        });
        for (std::size_t i = 0; i < selected.size(); ++i) {
          if (trained[i]) acc.add_loss(losses[i]);
        }
      }

      if (env_steps % tc.target_sync_every == 0) {
        for (const int m : selected) sync_target(agents[m].online, agents[m].target);
      }

      record_history();
      acc.add_step(outcome);

      if (sc.arrival_prob == 0.0 && env.total_queued() == 0) break;  // drained
    }

    if (federated) {
      std::vector<QNetworkParams> uploads;
      uploads.reserve(selected.size());
      for (const int m : selected) uploads.push_back(agents[m].online);
      aggregated = fedavg(uploads);
      if (hooks && hooks->on_round_end) hooks->on_round_end(ep, aggregated);
    }

    result.episodes.push_back(acc.finish(ep + 1, eps));
  }

  result.device_params.reserve(m_count);
  for (const auto& agent : agents) result.device_params.push_back(agent.online);
  if (federated) result.aggregated_params = aggregated;
  return result;
}

}  // namespace detail

TrainResult run_training(const ExperimentConfig& cfg, std::uint64_t seed,
                         const RunHooks* hooks, const RunOptions& options) {
  return detail::run_ddqn_fleet(cfg, seed, /*federated=*/true, hooks, options);
}

}  // namespace fedmec

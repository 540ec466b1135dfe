#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedmec/rng.hpp"

namespace fedmec {

// Fully connected Q-network parameters: rectified hidden layers, linear
// output head. weights[l] is (sizes[l+1] x sizes[l]) row-major.
struct QNetworkParams {
  std::vector<int> sizes;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  bool same_shape(const QNetworkParams& other) const { return sizes == other.sizes; }
};

// Uniform Glorot initialization from the given stream.
QNetworkParams make_network(const std::vector<int>& sizes, RngStream& rng);

std::vector<double> forward(const QNetworkParams& net, std::span<const double> input);

struct Transition {
  std::vector<double> state;
  int action = 0;
  double cost = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

// Double-DQN bootstrap for cost minimization: the online net picks the
// argmin action in the next state, the target net prices it.
double ddqn_target(const Transition& tr, const QNetworkParams& online,
                   const QNetworkParams& target, double gamma);

// Standard (non-double) bootstrap: the target net both picks and prices.
double dqn_target(const Transition& tr, const QNetworkParams& target, double gamma);

// Adam moments; one instance per trained network.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long t = 0;
  std::vector<std::vector<double>> m_w, v_w, m_b, v_b;

  static AdamState like(const QNetworkParams& net);
};

// One MSE gradient step of the online network against per-transition
// targets. Returns the pre-update loss; throws on a non-finite loss.
double train_step(QNetworkParams& online, AdamState& opt,
                  std::span<const Transition* const> batch,
                  std::span<const double> targets, double learning_rate);

// Epsilon-greedy over the valid actions; greedy ties break toward the
// lowest index.
int act(const QNetworkParams& net, std::span<const double> state, double epsilon,
        RngStream& rng, const std::vector<std::uint8_t>& valid);

void sync_target(const QNetworkParams& online, QNetworkParams& target);

// Uniform replay memory, ring-buffer overwrite, without-replacement batches.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition tr);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return data_[i]; }

  std::vector<const Transition*> sample(std::size_t batch, RngStream& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> data_;
};

// Parameter snapshot wire format (checkpoints and aggregation payloads):
// bytes "FQN1", then u32 layer count, u32 layer sizes, then the f64 payload
// (per layer: row-major weights, then biases). Little-endian throughout.
std::vector<std::uint8_t> serialize_params(const QNetworkParams& net);
QNetworkParams deserialize_params(std::span<const std::uint8_t> bytes);
void save_params(const QNetworkParams& net, const std::string& path);
QNetworkParams load_params(const std::string& path);

}  // namespace fedmec

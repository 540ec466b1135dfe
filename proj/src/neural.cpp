#include "fedmec/neural.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fedmec {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

QNetworkParams make_network(const std::vector<int>& sizes, RngStream& rng) {
  if (sizes.size() < 2) throw std::invalid_argument("make_network: need at least two layers");
  QNetworkParams net;
  net.sizes = sizes;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int fan_in = sizes[l];
    const int fan_out = sizes[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::vector<double> w(static_cast<std::size_t>(fan_in) * fan_out);
    for (double& x : w) x = rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(fan_out, 0.0);
  }
  return net;
}

namespace {

// Forward pass keeping pre-activations; activations[0] is the input.
struct ForwardTrace {
  std::vector<std::vector<double>> pre;   // per layer
  std::vector<std::vector<double>> post;  // post[0] = input
};

ForwardTrace forward_trace(const QNetworkParams& net, std::span<const double> input) {
  if (static_cast<int>(input.size()) != net.sizes.front()) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  ForwardTrace trace;
  trace.post.emplace_back(input.begin(), input.end());
  const std::size_t layers = net.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    const int in_dim = net.sizes[l];
    const int out_dim = net.sizes[l + 1];
    const std::vector<double>& x = trace.post.back();
    std::vector<double> z(out_dim);
    for (int o = 0; o < out_dim; ++o) {
      double acc = net.biases[l][o];
      const double* row = net.weights[l].data() + static_cast<std::size_t>(o) * in_dim;
      for (int i = 0; i < in_dim; ++i) acc += row[i] * x[i];
      z[o] = acc;
    }
    std::vector<double> a(out_dim);
    if (l + 1 == layers) {
      a = z;  // linear head
    } else {
      for (int o = 0; o < out_dim; ++o) a[o] = z[o] > 0.0 ? z[o] : 0.0;
    }
    trace.pre.push_back(std::move(z));
    trace.post.push_back(std::move(a));
  }
  return trace;
}

int argmin_q(const std::vector<double>& q) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(q.size()); ++i) {
    if (q[i] < q[best]) best = i;
  }
  return best;
}

}  // namespace

std::vector<double> forward(const QNetworkParams& net, std::span<const double> input) {
  return forward_trace(net, input).post.back();
}

double ddqn_target(const Transition& tr, const QNetworkParams& online,
                   const QNetworkParams& target, double gamma) {
  if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("ddqn_target: gamma out of (0,1)");
  if (tr.terminal) return tr.cost;
  const std::vector<double> q_online = forward(online, tr.next_state);
  const int a_star = argmin_q(q_online);
  const std::vector<double> q_target = forward(target, tr.next_state);
  return tr.cost + gamma * q_target[a_star];
}

double dqn_target(const Transition& tr, const QNetworkParams& target, double gamma) {
  if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("dqn_target: gamma out of (0,1)");
  if (tr.terminal) return tr.cost;
  const std::vector<double> q = forward(target, tr.next_state);
  return tr.cost + gamma * q[argmin_q(q)];
}

AdamState AdamState::like(const QNetworkParams& net) {
  AdamState s;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    s.m_w.emplace_back(net.weights[l].size(), 0.0);
    s.v_w.emplace_back(net.weights[l].size(), 0.0);
    s.m_b.emplace_back(net.biases[l].size(), 0.0);
    s.v_b.emplace_back(net.biases[l].size(), 0.0);
  }
  return s;
}

double train_step(QNetworkParams& online, AdamState& opt,
                  std::span<const Transition* const> batch,
                  std::span<const double> targets, double learning_rate) {
  if (batch.empty()) throw std::invalid_argument("train_step: empty batch");
  if (batch.size() != targets.size()) {
    throw std::invalid_argument("train_step: batch/target size mismatch");
  }

  const std::size_t layers = online.weights.size();
  std::vector<std::vector<double>> grad_w(layers), grad_b(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    grad_w[l].assign(online.weights[l].size(), 0.0);
    grad_b[l].assign(online.biases[l].size(), 0.0);
  }

  const double batch_n = static_cast<double>(batch.size());
  double loss = 0.0;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const Transition& tr = *batch[k];
    const ForwardTrace trace = forward_trace(online, tr.state);
    const std::vector<double>& q = trace.post.back();
    if (tr.action < 0 || tr.action >= static_cast<int>(q.size())) {
      throw std::invalid_argument("train_step: action index out of range");
    }
    const double err = q[tr.action] - targets[k];
    loss += err * err;

    // backprop of mean squared error on the taken action only
    std::vector<double> delta(q.size(), 0.0);
    delta[tr.action] = 2.0 * err / batch_n;
    for (std::size_t l = layers; l-- > 0;) {
      const int in_dim = online.sizes[l];
      const int out_dim = online.sizes[l + 1];
      const std::vector<double>& x = trace.post[l];
      for (int o = 0; o < out_dim; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        grad_b[l][o] += d;
        double* grow = grad_w[l].data() + static_cast<std::size_t>(o) * in_dim;
        for (int i = 0; i < in_dim; ++i) grow[i] += d * x[i];
      }
      if (l == 0) break;
      std::vector<double> prev(in_dim, 0.0);
      for (int o = 0; o < out_dim; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* row = online.weights[l].data() + static_cast<std::size_t>(o) * in_dim;
        for (int i = 0; i < in_dim; ++i) prev[i] += d * row[i];
      }
      for (int i = 0; i < in_dim; ++i) {
        if (trace.pre[l - 1][i] <= 0.0) prev[i] = 0.0;  // relu gate
      }
      delta = std::move(prev);
    }
  }
  loss /= batch_n;
  if (!std::isfinite(loss)) throw std::runtime_error("train_step: loss diverged");

  ++opt.t;
  const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.t));
  const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.t));
  const auto adam_update = [&](std::vector<double>& theta, std::vector<double>& m,
                               std::vector<double>& v, const std::vector<double>& g) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * g[i];
      v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      theta[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + opt.eps);
    }
  };
  for (std::size_t l = 0; l < layers; ++l) {
    adam_update(online.weights[l], opt.m_w[l], opt.v_w[l], grad_w[l]);
    adam_update(online.biases[l], opt.m_b[l], opt.v_b[l], grad_b[l]);
  }
  return loss;
}

int act(const QNetworkParams& net, std::span<const double> state, double epsilon,
        RngStream& rng, const std::vector<std::uint8_t>& valid) {
  if (valid.size() != static_cast<std::size_t>(net.sizes.back())) {
    throw std::invalid_argument("act: validity mask size mismatch");
  }
  std::vector<int> allowed;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    if (valid[i]) allowed.push_back(static_cast<int>(i));
  }
  if (allowed.empty()) throw std::invalid_argument("act: no valid action");

  const double u = rng.uniform01();
  if (u < epsilon) {
    return allowed[rng.uniform_int(allowed.size())];
  }
  const std::vector<double> q = forward(net, state);
  int best = allowed.front();
  for (const int a : allowed) {
    if (q[a] < q[best]) best = a;
  }
  return best;
}

void sync_target(const QNetworkParams& online, QNetworkParams& target) {
  target = online;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: zero capacity");
  data_.reserve(capacity_);
}

void ReplayBuffer::push(Transition tr) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(tr));
  } else {
    data_[next_] = std::move(tr);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch,
                                                    RngStream& rng) const {
  if (batch == 0 || batch > data_.size()) {
    throw std::invalid_argument("ReplayBuffer::sample: bad batch size");
  }
  // Floyd's distinct-index sampling; order of selection is kept so the
  // gradient accumulation order is reproducible.
  std::vector<std::size_t> picked;
  picked.reserve(batch);
  for (std::size_t j = data_.size() - batch; j < data_.size(); ++j) {
    const std::size_t t = rng.uniform_int(j + 1);
    if (std::find(picked.begin(), picked.end(), t) == picked.end()) {
      picked.push_back(t);
    } else {
      picked.push_back(j);
    }
  }
  std::vector<const Transition*> result;
  result.reserve(batch);
  for (const std::size_t idx : picked) result.push_back(&data_[idx]);
  return result;
}

namespace {

template <typename T>
void append_raw(std::vector<std::uint8_t>& out, const T& value) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T read_raw(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) {
    throw std::invalid_argument("deserialize_params: truncated payload");
  }
  T value;
  std::memcpy(&value, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

}  // namespace

std::vector<std::uint8_t> serialize_params(const QNetworkParams& net) {
  std::vector<std::uint8_t> out;
  out.push_back('F');
  out.push_back('Q');
  out.push_back('N');
  out.push_back('1');
  append_raw(out, static_cast<std::uint32_t>(net.sizes.size()));
  for (const int s : net.sizes) append_raw(out, static_cast<std::uint32_t>(s));
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    for (const double w : net.weights[l]) append_raw(out, w);
    for (const double b : net.biases[l]) append_raw(out, b);
  }
  return out;
}

QNetworkParams deserialize_params(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  if (bytes.size() < 4 || bytes[0] != 'F' || bytes[1] != 'Q' || bytes[2] != 'N' ||
      bytes[3] != '1') {
    throw std::invalid_argument("deserialize_params: bad magic");
  }
  pos = 4;
  const auto n_sizes = read_raw<std::uint32_t>(bytes, pos);
  if (n_sizes < 2 || n_sizes > 64) {
    throw std::invalid_argument("deserialize_params: bad layer count");
  }
  QNetworkParams net;
  for (std::uint32_t i = 0; i < n_sizes; ++i) {
    net.sizes.push_back(static_cast<int>(read_raw<std::uint32_t>(bytes, pos)));
  }
  for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
    const std::size_t w_count =
        static_cast<std::size_t>(net.sizes[l]) * net.sizes[l + 1];
    std::vector<double> w(w_count);
    for (double& x : w) x = read_raw<double>(bytes, pos);
    std::vector<double> b(net.sizes[l + 1]);
    for (double& x : b) x = read_raw<double>(bytes, pos);
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  if (pos != bytes.size()) {
    throw std::invalid_argument("deserialize_params: trailing bytes");
  }
  return net;
}

void save_params(const QNetworkParams& net, const std::string& path) {
  const std::vector<std::uint8_t> bytes = serialize_params(net);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_params: cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

QNetworkParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_params: cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_params(bytes);
}

}  // namespace fedmec

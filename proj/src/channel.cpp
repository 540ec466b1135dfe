#include "fedmec/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace fedmec {

double path_loss(double distance_m, double exponent, double ref_loss_db) {
  if (distance_m < 1.0) {
    throw std::invalid_argument(
        "path_loss: distance below the 1 m reference; clamp before calling");
  }
  return std::pow(10.0, -ref_loss_db / 10.0) * std::pow(distance_m, -exponent);
}

double sinr(double p_tx_w, const LinkGeometry& geom, double path_gain,
            double fading, double interference_w, double noise_w) {
  if (noise_w <= 0.0) throw std::invalid_argument("sinr: noise must be positive");
  if (p_tx_w <= 0.0) throw std::invalid_argument("sinr: transmit power must be positive");
  if (interference_w < 0.0) throw std::invalid_argument("sinr: negative interference");
  return geom.gain_device * geom.gain_bs * p_tx_w * fading * path_gain /
         (interference_w + noise_w);
}

double rate_bps(double bandwidth_hz, double sinr_value) {
  if (bandwidth_hz <= 0.0) throw std::invalid_argument("rate: bandwidth must be positive");
  if (sinr_value < 0.0) throw std::invalid_argument("rate: negative sinr");
  return bandwidth_hz * std::log2(1.0 + sinr_value);
}

double draw_fading(RngStream& rng) { return rng.exponential(); }

std::vector<double> interference_set(
    const std::vector<int>& bs_choice, const std::vector<double>& tx_power_w,
    const std::vector<std::vector<double>>& link_gain) {
  const std::size_t m_count = bs_choice.size();
  if (tx_power_w.size() != m_count || link_gain.size() != m_count) {
    throw std::invalid_argument("interference_set: mismatched inputs");
  }

  std::vector<double> interference(m_count, 0.0);
  for (std::size_t m = 0; m < m_count; ++m) {
    const int serving = bs_choice[m];
    if (serving < 0) continue;
    const double own_rx = tx_power_w[m] * link_gain[m][serving];
    double acc = 0.0;
    for (std::size_t other = 0; other < m_count; ++other) {
      if (other == m || bs_choice[other] < 0) continue;
      const double rx = tx_power_w[other] * link_gain[other][serving];
      if (bs_choice[other] == serving) {
        // same cell: only transmitters decoded after m remain
        const bool decoded_after =
            rx < own_rx || (rx == own_rx && other > m);
        if (decoded_after) acc += rx;
      } else {
        acc += rx;
      }
    }
    interference[m] = acc;
  }
  return interference;
}

AirOutcome transmit_task(double task_bits, double p_tx_w,
                         const LinkGeometry& geom, double path_gain,
                         double interference_w, const TransmitParams& prm,
                         RngStream& rng) {
  if (task_bits <= 0.0) throw std::invalid_argument("transmit_task: empty task");
  if (p_tx_w <= 0.0) throw std::invalid_argument("transmit_task: non-positive power");
  if (prm.slot_s <= 0.0) throw std::invalid_argument("transmit_task: bad slot");
  if (prm.max_attempts < 1) throw std::invalid_argument("transmit_task: bad attempt cap");

  const long long cap_slots =
      std::max<long long>(1, std::llround(prm.zero_rate_cap_s / prm.slot_s));
  // keeps (long long) conversions defined for absurdly slow rates
  const double kSlotLimit = 1e15;

  AirOutcome out;
  for (int attempt = 1; attempt <= prm.max_attempts; ++attempt) {
    out.attempts = attempt;
    const double h = draw_fading(rng);
    const double r = rate_bps(
        prm.bandwidth_hz,
        sinr(p_tx_w, geom, path_gain, h, interference_w, prm.noise_w));
    long long slots;
    bool failed;
    if (r > 0.0) {
      double need = std::ceil(task_bits / (r * prm.slot_s));
      if (!(need < kSlotLimit)) need = kSlotLimit;
      slots = std::max<long long>(1, static_cast<long long>(need));
      failed = rng.uniform01() < prm.err_prob;
    } else {
      slots = cap_slots;
      failed = true;
    }
    out.slots += slots;
    if (!failed) {
      out.delivered = true;
      break;
    }
  }
  out.latency_s = static_cast<double>(out.slots) * prm.slot_s;
  out.energy_j = out.latency_s * p_tx_w;
  return out;
}

}  // namespace fedmec

#pragma once

#include <vector>

#include "fedmec/rng.hpp"

namespace fedmec {

struct LinkGeometry {
  int device_id = 0;
  int bs_id = 0;
  double distance_m = 1.0;
  double gain_device = 1.0;  // antenna gain at the device
  double gain_bs = 1.0;      // antenna gain at the base station
};

// Result of pushing one task over the air, retransmissions included.
// latency is always slots * slot_s and energy is always latency * p_tx.
struct AirOutcome {
  double latency_s = 0.0;
  double energy_j = 0.0;
  int attempts = 0;
  long long slots = 0;
  bool delivered = false;
};

struct TransmitParams {
  double bandwidth_hz = 50e6;
  double noise_w = 0.0;
  double slot_s = 1e-3;
  double err_prob = 0.1;
  int max_attempts = 5;
  double zero_rate_cap_s = 0.1;  // charged when an attempt sees zero rate
};

// Log-distance path loss: 10^(-ref_loss_db/10) * d^(-exponent).
// Distances below the 1 m reference are a caller error.
double path_loss(double distance_m, double exponent, double ref_loss_db);

// Uplink SINR: G_m * G_n * p * h * L / (interference + noise).
double sinr(double p_tx_w, const LinkGeometry& geom, double path_gain,
            double fading, double interference_w, double noise_w);

// Shannon rate over the full band.
double rate_bps(double bandwidth_hz, double sinr_value);

// Rayleigh fading power gain: exponential with mean 1.
double draw_fading(RngStream& rng);

// Per-device uplink interference under SIC.
//
// bs_choice[m] is the serving BS of device m, or -1 when the device is not
// transmitting this slot. link_gain[m][n] is the combined channel gain
// G_m*G_n*h*L from device m to BS n, so the received power at n is
// tx_power_w[m] * link_gain[m][n].
//
// At one BS the transmitters are decoded in order of descending received
// power (ties broken by lower device id first); a device is interfered by
// everything decoded after it. Transmitters at other BSs contribute their
// full received power. Accumulation runs in ascending device id so results
// are reproducible bit-for-bit.
std::vector<double> interference_set(
    const std::vector<int>& bs_choice, const std::vector<double>& tx_power_w,
    const std::vector<std::vector<double>>& link_gain);

// Simulates the uplink delivery of one task. Every attempt redraws fading,
// quantizes the airtime up to whole slots, and fails independently with
// err_prob. A zero-rate attempt is charged zero_rate_cap_s and always fails.
// Stops at the first success or after max_attempts.
AirOutcome transmit_task(double task_bits, double p_tx_w,
                         const LinkGeometry& geom, double path_gain,
                         double interference_w, const TransmitParams& prm,
                         RngStream& rng);

}  // namespace fedmec

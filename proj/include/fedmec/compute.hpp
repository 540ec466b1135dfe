#pragma once

namespace fedmec {

// One unit of work.
struct Task {
  double bits = 0.0;
  double cycles = 0.0;
  long arrival_step = 0;
  double deadline_s = 0.0;
};

struct DeviceProfile {
  double chip_coeff = 1e-27;    // energy coefficient of the device chip
  double max_freq_hz = 1e8;     // local CPU cap
  double energy_budget_j = 1e-3;
  double max_tx_power_w = 0.01;
  double pos_x_m = 0.0;
  double pos_y_m = 0.0;
  double antenna_gain = 1.0;
};

// cycles / f_loc
double local_latency(double cycles, double f_loc_hz);

// chip_coeff * f_loc^2. Callers that want the energy to scale with the task
// size fold the cycle count into the coefficient.
double local_energy(double chip_coeff, double f_loc_hz);

// cycles / f_edge
double edge_latency(double cycles, double f_edge_hz);

}  // namespace fedmec

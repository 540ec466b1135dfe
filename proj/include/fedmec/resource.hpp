#pragma once

#include <variant>

#include "fedmec/channel.hpp"
#include "fedmec/compute.hpp"

namespace fedmec {

enum class InfeasibleReason { kDeadline, kEnergy, kCapacity };

struct Infeasible {
  InfeasibleReason reason;
};

// Outcome of the local-frequency subproblem.
struct LocalAllocation {
  double f_loc_hz = 0.0;
  double latency_s = 0.0;
  double energy_j = 0.0;
  double cost = 0.0;  // latency + lambda * energy
};

// Outcome of the transmit-power / edge-frequency subproblem. Latency and
// energy here are the solver's deterministic single-attempt view; realized
// values come from the simulated transmission.
struct EdgeAllocation {
  double tx_power_w = 0.0;
  double f_edge_hz = 0.0;
  double latency_s = 0.0;
  double energy_j = 0.0;
  double cost = 0.0;
};

using LocalResult = std::variant<LocalAllocation, Infeasible>;
using EdgeResult = std::variant<EdgeAllocation, Infeasible>;

template <typename R>
bool feasible(const R& r) {
  return !std::holds_alternative<Infeasible>(r);
}

// Channel conditions frozen at decision time.
struct LinkSnapshot {
  LinkGeometry geom;
  double path_gain = 1.0;
  double fading = 1.0;
  double interference_w = 0.0;
  double noise_w = 1e-12;
  double bandwidth_hz = 50e6;
};

// Minimizes cycles/f + lambda * zeta * f^2 over the feasible frequency band
// [cycles/deadline, min(F_max, sqrt(E_max/zeta))]. Closed form: the
// unconstrained minimizer (cycles / (2 lambda zeta))^(1/3), clamped.
LocalResult solve_local(const Task& task, const DeviceProfile& dev,
                        double lambda, bool energy_includes_cycles = false);

// Minimizes comp latency + bits*(1 + lambda*p)/rate(p) over p in (0, P_max]
// with the edge share fixed at f_grant (the objective is strictly decreasing
// in the edge frequency, so the granted cap is optimal). Golden-section
// search to 1e-6 relative width, restricted to the deadline- and
// energy-feasible power band when the unconstrained optimum violates one.
EdgeResult solve_edge(const Task& task, const DeviceProfile& dev,
                      const LinkSnapshot& link, double f_grant_hz,
                      double lambda);

// Exhaustive minimizers over a uniform grid of the same feasible sets.
// Test oracles; independent of the closed-form / search paths above.
LocalResult grid_oracle_local(const Task& task, const DeviceProfile& dev,
                              double lambda, bool energy_includes_cycles,
                              int grid_size);
EdgeResult grid_oracle_edge(const Task& task, const DeviceProfile& dev,
                            const LinkSnapshot& link, double f_grant_hz,
                            double lambda, int grid_size);

}  // namespace fedmec

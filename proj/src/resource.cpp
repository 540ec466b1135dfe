#include "fedmec/resource.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fedmec {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

template <typename F>
double golden_min(F&& f, double lo, double hi, double tol_abs) {
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol_abs) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Boundary of a predicate that holds on [x*, hi]; returns a point where it
// holds. pre: ok(hi), !ok(lo).
template <typename P>
double bisect_lowest_ok(P&& ok, double lo, double hi) {
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Boundary of a predicate that holds on [lo, x*]; returns a point where it
// holds. pre: ok(lo), !ok(hi).
template <typename P>
double bisect_highest_ok(P&& ok, double lo, double hi) {
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

LocalResult solve_local(const Task& task, const DeviceProfile& dev,
                        double lambda, bool energy_includes_cycles) {
  if (lambda < 0.0) throw std::invalid_argument("solve_local: negative lambda");
  if (task.cycles <= 0.0) throw std::invalid_argument("solve_local: empty task");
  if (task.deadline_s <= 0.0) throw std::invalid_argument("solve_local: bad deadline");

  const double zeta = energy_includes_cycles ? dev.chip_coeff * task.cycles
                                             : dev.chip_coeff;
  const double f_lo = task.cycles / task.deadline_s;              // C2
  const double f_energy = std::sqrt(dev.energy_budget_j / zeta);  // C1
  const double f_hi = std::min(dev.max_freq_hz, f_energy);        // C3
  if (f_lo > f_hi) {
    // deadline when the CPU cap binds, energy when the budget does
    return Infeasible{dev.max_freq_hz <= f_energy ? InfeasibleReason::kDeadline
                                                  : InfeasibleReason::kEnergy};
  }

  const double f_star = std::cbrt(task.cycles / (2.0 * lambda * zeta));
  const double f = std::clamp(f_star, f_lo, f_hi);
  const double latency = task.cycles / f;
  const double energy = zeta * f * f;
  return LocalAllocation{f, latency, energy, latency + lambda * energy};
}

LocalResult grid_oracle_local(const Task& task, const DeviceProfile& dev,
                              double lambda, bool energy_includes_cycles,
                              int grid_size) {
  if (grid_size < 1000) throw std::invalid_argument("grid_oracle_local: grid too coarse");
  const double zeta = energy_includes_cycles ? dev.chip_coeff * task.cycles
                                             : dev.chip_coeff;
  const double f_lo = task.cycles / task.deadline_s;
  const double f_energy = std::sqrt(dev.energy_budget_j / zeta);
  const double f_hi = std::min(dev.max_freq_hz, f_energy);
  if (f_lo > f_hi) {
    return Infeasible{dev.max_freq_hz <= f_energy ? InfeasibleReason::kDeadline
                                                  : InfeasibleReason::kEnergy};
  }

  double best_cost = std::numeric_limits<double>::infinity();
  double best_f = f_lo;
  for (int i = 0; i < grid_size; ++i) {
    const double f =
        f_lo + (f_hi - f_lo) * static_cast<double>(i) / (grid_size - 1);
    if (f <= 0.0) continue;
    const double cost = task.cycles / f + lambda * zeta * f * f;
    if (cost < best_cost) {
      best_cost = cost;
      best_f = f;
    }
  }
  const double latency = task.cycles / best_f;
  const double energy = zeta * best_f * best_f;
  return LocalAllocation{best_f, latency, energy, latency + lambda * energy};
}

EdgeResult solve_edge(const Task& task, const DeviceProfile& dev,
                      const LinkSnapshot& link, double f_grant_hz,
                      double lambda) {
  if (f_grant_hz <= 0.0) throw std::invalid_argument("solve_edge: non-positive grant");
  if (lambda < 0.0) throw std::invalid_argument("solve_edge: negative lambda");
  if (task.cycles <= 0.0 || task.bits <= 0.0) {
    throw std::invalid_argument("solve_edge: empty task");
  }
  if (dev.energy_budget_j <= 0.0) return Infeasible{InfeasibleReason::kEnergy};

  const double coupling =
      link.geom.gain_device * link.geom.gain_bs * link.fading * link.path_gain;
  if (coupling <= 0.0) return Infeasible{InfeasibleReason::kCapacity};

  const double tau_comp = task.cycles / f_grant_hz;
  const auto rate_of = [&](double p) {
    return rate_bps(link.bandwidth_hz,
                    sinr(p, link.geom, link.path_gain, link.fading,
                         link.interference_w, link.noise_w));
  };
  const auto latency_of = [&](double p) { return tau_comp + task.bits / rate_of(p); };
  const auto energy_of = [&](double p) { return task.bits * p / rate_of(p); };
  const auto cost_of = [&](double p) {
    return tau_comp + task.bits * (1.0 + lambda * p) / rate_of(p);
  };

  const double p_hi = dev.max_tx_power_w;
  const double p_lo = p_hi * 1e-9;
  const double tol = 1e-6 * p_hi;

  double p = golden_min(cost_of, p_lo, p_hi, tol);
  const bool meets_deadline = latency_of(p) <= task.deadline_s;
  const bool meets_energy = energy_of(p) <= dev.energy_budget_j;
  if (!meets_deadline || !meets_energy) {
    // latency is strictly decreasing in p, energy strictly increasing; the
    // feasible set is a power band [p_t, p_e]
    if (latency_of(p_hi) > task.deadline_s) {
      return Infeasible{InfeasibleReason::kDeadline};
    }
    const double p_t =
        latency_of(p_lo) <= task.deadline_s
            ? p_lo
            : bisect_lowest_ok(
                  [&](double q) { return latency_of(q) <= task.deadline_s; },
                  p_lo, p_hi);
    if (energy_of(p_lo) > dev.energy_budget_j) {
      return Infeasible{InfeasibleReason::kEnergy};
    }
    const double p_e =
        energy_of(p_hi) <= dev.energy_budget_j
            ? p_hi
            : bisect_highest_ok(
                  [&](double q) { return energy_of(q) <= dev.energy_budget_j; },
                  p_lo, p_hi);
    if (p_t > p_e) return Infeasible{InfeasibleReason::kEnergy};
    p = std::clamp(golden_min(cost_of, p_t, p_e, tol), p_t, p_e);
  }
  return EdgeAllocation{p, f_grant_hz, latency_of(p), energy_of(p), cost_of(p)};
}

EdgeResult grid_oracle_edge(const Task& task, const DeviceProfile& dev,
                            const LinkSnapshot& link, double f_grant_hz,
                            double lambda, int grid_size) {
  if (grid_size < 1000) throw std::invalid_argument("grid_oracle_edge: grid too coarse");
  if (dev.energy_budget_j <= 0.0) return Infeasible{InfeasibleReason::kEnergy};
  const double coupling =
      link.geom.gain_device * link.geom.gain_bs * link.fading * link.path_gain;
  if (coupling <= 0.0) return Infeasible{InfeasibleReason::kCapacity};

  const double tau_comp = task.cycles / f_grant_hz;
  const double denom = link.interference_w + link.noise_w;
  const double p_hi = dev.max_tx_power_w;

  double best_cost = std::numeric_limits<double>::infinity();
  double best_p = 0.0;
  double best_latency = 0.0;
  double best_energy = 0.0;
  bool any_deadline_ok = false;
  for (int i = 1; i <= grid_size; ++i) {
    const double p = p_hi * static_cast<double>(i) / grid_size;
    const double gamma = coupling * p / denom;
    const double r = link.bandwidth_hz * std::log2(1.0 + gamma);
    if (r <= 0.0) continue;
    const double latency = tau_comp + task.bits / r;
    if (latency > task.deadline_s) continue;
    any_deadline_ok = true;
    const double energy = task.bits * p / r;
    if (energy > dev.energy_budget_j) continue;
    const double cost = tau_comp + task.bits * (1.0 + lambda * p) / r;
    if (cost < best_cost) {
      best_cost = cost;
      best_p = p;
      best_latency = latency;
      best_energy = energy;
    }
  }
  if (best_p == 0.0) {
    return Infeasible{any_deadline_ok ? InfeasibleReason::kEnergy
                                      : InfeasibleReason::kDeadline};
  }
  return EdgeAllocation{best_p, f_grant_hz, best_latency, best_energy, best_cost};
}

}  // namespace fedmec

#include "fedmec/compute.hpp"

#include <stdexcept>

namespace fedmec {

double local_latency(double cycles, double f_loc_hz) {
  if (f_loc_hz <= 0.0) throw std::invalid_argument("local_latency: non-positive frequency");
  if (cycles < 0.0) throw std::invalid_argument("local_latency: negative cycles");
  return cycles / f_loc_hz;
}

double local_energy(double chip_coeff, double f_loc_hz) {
  if (f_loc_hz < 0.0) throw std::invalid_argument("local_energy: negative frequency");
  return chip_coeff * f_loc_hz * f_loc_hz;
}

double edge_latency(double cycles, double f_edge_hz) {
  if (f_edge_hz <= 0.0) throw std::invalid_argument("edge_latency: non-positive frequency");
  if (cycles < 0.0) throw std::invalid_argument("edge_latency: negative cycles");
  return cycles / f_edge_hz;
}

}  // namespace fedmec

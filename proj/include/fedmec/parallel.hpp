#pragma once

#include <cstddef>

#include <omp.h>

namespace fedmec {

// Runs fn(i) for i in [0, n). workers <= 1 takes the plain serial loop, which
// is the reference path the tests compare against; otherwise the range goes
// to OpenMP. Callers must ensure fn(i) touches only per-index state.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    fn(static_cast<std::size_t>(i));
  }
}

inline int hardware_workers() { return omp_get_max_threads(); }

}  // namespace fedmec

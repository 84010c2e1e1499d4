#pragma once

#include <exception>
#include <functional>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mmdpath::parallel {

// Runs f(i) for i in [0, n). parallelism <= 1 executes the plain serial loop,
// which is the reference path the determinism tests compare against; larger
// values use OpenMP when available. Each task writes only into its own slot,
// so results do not depend on scheduling. If any task throws, the exception
// for the smallest index is rethrown after the loop completes, which keeps
// the observable failure independent of the thread count.
template <typename F>
void for_each_index(int n, int parallelism, F&& f) {
  if (n <= 0) return;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));

#ifdef _OPENMP
  if (parallelism > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(parallelism)
    for (int i = 0; i < n; ++i) {
      try {
        f(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    for (int i = 0; i < n; ++i) {
      if (errors[static_cast<std::size_t>(i)]) std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
    }
    return;
  }
#else
  (void)parallelism;
#endif

  for (int i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (int i = 0; i < n; ++i) {
    if (errors[static_cast<std::size_t>(i)]) std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
  }
}

inline int hardware_parallelism() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace mmdpath::parallel

#pragma once

// Thin OpenMP shims so the kernels compile with or without -fopenmp.
#ifdef _OPENMP
#include <omp.h>
#endif

namespace ramsim::parallel {

/// Which implementation of a data-parallel kernel to run. Both produce
/// bit-identical results; the serial path is the reference.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace ramsim::parallel

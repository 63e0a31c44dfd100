#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace grrf {

// Worker count for a requested --threads value; 0 means all hardware threads.
inline int resolve_threads(int requested) {
#ifdef _OPENMP
  if (requested > 0) return requested;
  return omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

inline bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

// Runs body(i) for i in [0, count). With nthreads <= 1 this is the serial
// reference loop; otherwise iterations run under OpenMP. Bodies must write
// only to their own slot so both paths produce identical results.
template <typename Body>
void parallel_for(std::size_t count, int nthreads, const Body& body) {
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
    body(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < count; ++i) body(i);
#endif
}

}  // namespace grrf

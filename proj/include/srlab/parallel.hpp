#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace srlab {

// Hot loops (subset scans, vertex scans, restart searches) run either through
// the OpenMP path or the serial reference path. Results must be identical:
// every reduction is done by filling a value array indexed by iteration and
// reducing serially afterwards, so thread count never affects the outcome.
enum class Exec { serial, parallel };

template <class F>
void parallel_for(Exec exec, std::int64_t n, F&& body) {
  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
#endif
  }
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

// Smallest index attaining the minimum of `values` up to tie_tol: index of
// the first value <= min + tie_tol. tie_tol = 0 gives exact-min first index.
inline std::int64_t argmin_with_ties(const std::vector<double>& values, double tie_tol) {
  std::int64_t best = -1;
  double mn = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (best < 0 || values[i] < mn) {
      mn = values[i];
      best = static_cast<std::int64_t>(i);
    }
  }
  if (best < 0) return -1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= mn + tie_tol) return static_cast<std::int64_t>(i);
  }
  return best;
}

inline std::int64_t argmax_with_ties(const std::vector<double>& values, double tie_tol) {
  std::int64_t best = -1;
  double mx = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (best < 0 || values[i] > mx) {
      mx = values[i];
      best = static_cast<std::int64_t>(i);
    }
  }
  if (best < 0) return -1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= mx - tie_tol) return static_cast<std::int64_t>(i);
  }
  return best;
}

}  // namespace srlab

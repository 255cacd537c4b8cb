#pragma once

#include <cstddef>

namespace supg {

/// Selects the OpenMP kernel or its serial reference loop. Both visit cells
/// independently and reduce in cell order, so results are bitwise equal.
enum class Execution { serial, parallel };

/// Calls fn(k) for every k in [0, n). `fn` must not throw and must only
/// write to slot k of its outputs.
template <typename Fn>
void for_each_cell(std::size_t n, Execution exec, Fn&& fn) {
  if (exec == Execution::parallel) {
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < count; ++k) fn(static_cast<std::size_t>(k));
  } else {
    for (std::size_t k = 0; k < n; ++k) fn(k);
  }
}

/// Number of OpenMP threads the parallel kernels will use.
int max_threads();

}  // namespace supg

#pragma once

// Execution policy for the component loops of the tensor kernels.  The
// serial path is the reference; the parallel path distributes independent
// component computations over OpenMP threads.

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace epc {

enum class Exec { Serial, Parallel };

/// Runs f(0..n-1).  Each index must write only its own outputs.  The first
/// exception raised by any iteration is rethrown after the loop.
template <class F>
void parallel_for(std::size_t n, Exec exec, F&& f) {
  if (exec == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr error;
  std::mutex m;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(m);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace epc

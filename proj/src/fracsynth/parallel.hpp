#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace fracsynth {

/// Runs fn(i) for i in [0, n). Each index must write only its own output so
/// results do not depend on the thread count. The first exception thrown by
/// any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, Fn &&fn) {
  std::exception_ptr first;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

/// Sets the worker count used by parallel_for; 0 leaves the runtime default.
void set_thread_count(int n);
int thread_count();

}  // namespace fracsynth

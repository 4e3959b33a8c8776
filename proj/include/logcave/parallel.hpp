#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#ifdef LOGCAVE_HAS_OPENMP
#include <omp.h>
#endif

namespace logcave {

// Every kernel takes an execution policy. Serial runs the exact same chunk
// schedule on one thread, so for any fixed seed the two policies produce
// bit-identical results; tests assert this. Parallel is the default.
enum class Exec { Serial, Parallel };

// Worker cap: min(OpenMP max threads, LOGCAVE_THREADS if set). Capping the
// worker count never changes results, only wall time.
int max_workers();

// Index-parallel loop with exception capture (exceptions may not cross an
// OpenMP region boundary, so the first one is stashed and rethrown after).
template <typename Fn>
void for_each_index(std::size_t count, Exec exec, Fn&& fn) {
#ifdef LOGCAVE_HAS_OPENMP
  if (exec == Exec::Parallel && count > 1 && max_workers() > 1) {
    std::exception_ptr err;
    std::mutex err_mu;
#pragma omp parallel for schedule(dynamic) num_threads(max_workers())
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#endif
  (void)exec;
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

}  // namespace logcave

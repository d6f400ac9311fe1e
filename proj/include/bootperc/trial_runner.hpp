#pragma once

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bootperc {

/// Worker count for trial batches: BOOTPERC_WORKERS from the environment if
/// set to a positive integer, otherwise `requested`, otherwise all cores.
unsigned resolve_workers(unsigned requested = 0);

/// Runs fn(0), ..., fn(count-1) in order on the calling thread.
template <class Fn>
auto run_trials_serial(std::size_t count, Fn&& fn) {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<Result> results;
  results.reserve(count);
  for (std::size_t i = 0; i < count; ++i) results.push_back(fn(i));
  return results;
}

/// Runs fn(i) for i in [0, count) across `workers` OpenMP threads. Result i
/// always lands in slot i, so the output is independent of the worker count
/// as long as fn(i) depends only on i. The first exception thrown by any
/// trial is rethrown after the batch.
template <class Fn>
auto run_trials(std::size_t count, unsigned workers, Fn&& fn) {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  static_assert(std::is_default_constructible_v<Result>);
#ifdef _OPENMP
  if (workers > 1 && count > 1) {
    std::vector<Result> results(count);
    std::exception_ptr failure;
    const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(workers))
    for (long long i = 0; i < total; ++i) {
      try {
        results[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(bootperc_trial_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    return results;
  }
#else
  (void)workers;
#endif
  return run_trials_serial(count, fn);
}

}  // namespace bootperc

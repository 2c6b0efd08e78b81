#pragma once

#include <cstddef>
#include <functional>

namespace polokit {

/// Worker count: POLO_KIT_THREADS if set (>= 1), else hardware concurrency.
[[nodiscard]] std::size_t worker_count();

/// Runs fn(i) for i in [0, n) over up to `workers` threads. Each index is
/// visited exactly once; callers write results into per-index slots so that
/// output order never depends on scheduling. The first exception thrown by
/// any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t workers = worker_count());

}  // namespace polokit

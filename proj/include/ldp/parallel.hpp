#pragma once

#include <cstddef>
#include <functional>

namespace ldp {

/// Worker count: LDP_THREADS if set, else std::thread::hardware_concurrency (at least 1).
std::size_t default_threads();

/// Runs body(i) for i in [0, n) on `threads` workers with dynamic scheduling.
/// Callers write results into per-index slots, so output never depends on the schedule.
/// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace ldp

#pragma once

#include <cstddef>
#include <functional>

namespace harmonode {

/// Worker count: HARMONODE_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n). Iterations are independent; results must be
/// written to per-index slots so output order never depends on scheduling.
/// The first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace harmonode

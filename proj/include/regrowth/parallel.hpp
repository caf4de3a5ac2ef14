#pragma once

#include <cstddef>
#include <functional>

namespace regrowth {

/// Worker count: REGROWTH_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads. Iterations
/// must write disjoint outputs; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace regrowth

#pragma once

#include <cstddef>
#include <functional>

namespace polarkit {

// Worker count: POLARKIT_THREADS if set to a positive integer, otherwise
// the hardware concurrency (at least 1).
std::size_t thread_count();

// Calls body(k) for k in [0, count), partitioned into contiguous chunks
// across thread_count() workers. `body` must only write state owned by k.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace polarkit

#pragma once

#include <cstddef>
#include <functional>

namespace twotier {

// TWOTIER_THREADS if set to a positive integer, else hardware concurrency
// (at least 1).
unsigned default_thread_count();

// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
// handed out dynamically; callers must write results by index so that the
// outcome does not depend on scheduling. The first exception thrown by any
// body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace twotier

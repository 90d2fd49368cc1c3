#pragma once

#include <cstddef>
#include <functional>

namespace msmlab {

/// Worker count: MSMLAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n). Iterations must be independent. The first
/// exception thrown by any iteration is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace msmlab

#pragma once

#include <functional>

namespace symflow {

// Worker count: SYMFLOW_THREADS env var if set (clamped to [1, 256]),
// otherwise the hardware concurrency.
int thread_count();

// Run fn(begin, end) over contiguous chunks of [0, n) on up to thread_count()
// threads. Chunks write to disjoint data only, so results are bitwise
// independent of the worker count; reductions must combine chunk results in a
// fixed serial order on the caller side.
void parallel_for(int n, const std::function<void(int, int)>& fn);

}  // namespace symflow

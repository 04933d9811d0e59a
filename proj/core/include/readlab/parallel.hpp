#pragma once

#include <cstddef>
#include <functional>

namespace readlab {

// Worker count for per-document parallel loops. Respects the
// READABILITY_LAB_THREADS environment variable; defaults to the hardware
// concurrency, with a floor of 1.
size_t worker_count();

// Runs fn(i) for i in [0, count) across worker threads. Results must be
// written to disjoint slots so the output is independent of scheduling.
void parallel_for(size_t count, const std::function<void(size_t)>& fn);

}  // namespace readlab

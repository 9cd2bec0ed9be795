#pragma once

#include <cstddef>
#include <functional>

namespace dtwx {

/// Resolves a requested worker count: values >= 1 are taken as-is, anything
/// else falls back to the DTW_EXPLAIN_THREADS environment variable and then
/// to the hardware parallelism. Never returns less than 1.
int resolve_threads(int requested);

/// Runs f(i) for every i in [0, count) on up to `threads` workers pulling
/// indices from a shared counter. Blocks until all indices are done; the
/// first exception thrown by any worker is rethrown. Results must be
/// written to per-index slots so the outcome cannot depend on scheduling.
void parallel_for(size_t count, int threads, const std::function<void(size_t)>& f);

}  // namespace dtwx

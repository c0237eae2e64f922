#pragma once

#include <functional>

namespace ee {

/// Worker count: EE_THREADS if set to a positive integer, otherwise the
/// number of hardware threads (at least 1).
int thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index
/// runs exactly once; the first exception thrown by any body is rethrown
/// after all workers finish.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace ee

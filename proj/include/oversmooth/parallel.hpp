#pragma once

#include <functional>

namespace oversmooth {

/// Runs fn(0..n_tasks-1) across a small worker pool. threads <= 0 selects
/// the hardware concurrency. Tasks must write only to their own slots;
/// the first exception thrown by any task is rethrown after the pool joins.
void parallel_for(int n_tasks, int threads, const std::function<void(int)>& fn);

} // namespace oversmooth

#pragma once

#include <cstddef>
#include <functional>

namespace sig {

/// Number of worker threads used when a caller passes 0. Starts at 1 so
/// results are reproducible unless concurrency is requested explicitly.
[[nodiscard]] int default_thread_count();
void set_default_thread_count(int threads);

/// Runs fn(i) for i in [0, n). Work is split into contiguous index ranges,
/// one per worker. Each index must write only to its own output slot, which
/// makes the result independent of the thread count. The first exception
/// thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads = 0);

} // namespace sig

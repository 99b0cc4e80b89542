#pragma once

#include <cstddef>
#include <functional>

namespace pc {

/// Worker count: PC_THREADS if set and positive, otherwise the hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n). Work is split into contiguous blocks, one per worker, so any
/// per-index output written by fn is independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace pc

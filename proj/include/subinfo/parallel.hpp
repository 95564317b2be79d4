#pragma once

#include <cstddef>
#include <functional>

namespace subinfo {

// Worker count used when a call passes threads = 0. Initially the number of
// logical cores.
void set_default_threads(std::size_t n) noexcept;
std::size_t default_threads() noexcept;

// Calls fn(i) for i in [0, n) on up to `threads` workers, static contiguous
// partitioning. Results must be written to per-index slots; callers reduce
// them in index order, so output never depends on the thread count. The
// first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t threads = 0);

}  // namespace subinfo

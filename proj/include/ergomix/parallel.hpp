#pragma once

#include <cstddef>
#include <functional>

namespace ergomix {

/// Worker cap from ERGOMIX_THREADS (unset or 0 means hardware concurrency).
std::size_t worker_count();

/// Runs body(begin, end) over a static contiguous partition of [0, n).
/// Chunk boundaries are multiples of `align` so SIMD lanes never straddle
/// workers. Callers write to disjoint slots and reduce afterwards in index
/// order, so results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t align = 8);

}  // namespace ergomix

#pragma once

#include <cstddef>
#include <functional>

namespace detperm {

/// Number of worker threads to use for a request. Zero or negative means
/// "ask the hardware", with a floor of 1.
int resolve_thread_count(int requested);

/// Runs fn(i) for every i in [0, count), split into contiguous index blocks
/// across at most `threads` workers. Each index is visited exactly once, so
/// callers that write into per-index slots get identical results for any
/// thread count. The first exception thrown by any worker is rethrown here.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace detperm

#pragma once

#include <cstddef>
#include <functional>

namespace anisowave {

// Worker count: ANISOWAVE_THREADS if set, else hardware concurrency. Results
// of every parallel loop in this library are independent of the count.
int thread_count();
void set_thread_count(int n);  // n <= 0 restores the default

/// Runs body(begin, end) over a chunked partition of [0, n). Each index is
/// handled by exactly one chunk, so writes to disjoint slots are race-free.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace anisowave

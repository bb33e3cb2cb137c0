#pragma once

#include <cstddef>
#include <functional>

namespace corex {

// Process-wide cap on worker threads (>= 1). Default: 1.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Splits [0, n) into contiguous blocks, one per worker, and calls
/// body(begin, end) for each. Blocks never overlap, so bodies that only write
/// their own index range give identical results for every thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace corex

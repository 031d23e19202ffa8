#pragma once

#include <cstddef>
#include <functional>

namespace scriptcausal {

// Number of workers to use for a `threads` setting; 0 means hardware
// concurrency.
std::size_t resolve_threads(std::size_t threads);

// Runs body(i) for every i in [0, n). Each index must write only to its own
// output slot; callers reduce the slots in index order, which keeps results
// bitwise independent of the worker count.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace scriptcausal

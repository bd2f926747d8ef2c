#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace vexs {

// Worker count: hardware concurrency, capped by VEXS_THREADS when set (>= 1).
int worker_count();

// Calls body(i) for i in [0, n) on up to worker_count() threads. Each index
// runs exactly once; if any call throws, the exception of the lowest failing
// index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace vexs

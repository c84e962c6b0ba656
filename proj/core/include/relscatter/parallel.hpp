#pragma once

#include <cstddef>
#include <functional>

namespace relscatter {

// Worker count: RELSCATTER_THREADS if set and positive, else the OpenMP default.
int thread_count();

// Runs body(i) for i in [0, n). Each index must write only its own outputs,
// which keeps results independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace relscatter

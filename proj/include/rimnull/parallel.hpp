#pragma once

#include <cstddef>
#include <functional>

namespace rimnull {

// Number of worker threads: RIMNULL_THREADS when set, otherwise the hardware
// concurrency (at least 1).
unsigned worker_threads();

// Static-partition parallel map over [0, n). Each index is processed exactly
// once and writes only its own slot, so results do not depend on the thread
// count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rimnull

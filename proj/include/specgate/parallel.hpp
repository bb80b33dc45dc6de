#pragma once

#include <cstddef>
#include <functional>

namespace specgate {

/// Worker cap: SPECGATE_THREADS when set (minimum 1), else hardware
/// concurrency.
int thread_cap();

/// Runs f(i) for i in [0, n) on up to thread_cap() workers. Each index owns
/// its output slot, so results are identical to the serial order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace specgate

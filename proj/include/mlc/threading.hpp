#pragma once

#include <functional>

namespace mlc {

/// Worker count: explicit argument if > 0, else MLC_THREADS, else hardware.
int resolve_threads(int requested = 0);

/// Runs fn(i) for i in [0, n) across the given number of workers. Work items
/// must write to disjoint slots; scheduling never affects the values
/// computed, so results are bit-identical for any thread count.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

}  // namespace mlc

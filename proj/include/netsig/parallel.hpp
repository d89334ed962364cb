#pragma once

#include <functional>

namespace netsig {

// Resolves the worker count: explicit request > NETSIG_THREADS env var >
// hardware concurrency. Always at least 1.
int thread_budget(int requested = 0);

// Runs fn(i) for i in [0, count). Work items must be independent; results
// written to disjoint slots are deterministic regardless of thread count.
void parallel_for(int count, const std::function<void(int)>& fn,
                  int threads = 0);

}  // namespace netsig

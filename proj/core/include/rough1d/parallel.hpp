#pragma once

#include <functional>

namespace rough1d {

/// Upper bound on worker threads used inside the library (default: hardware
/// concurrency, at least 1). Values below 1 are treated as 1.
void set_thread_limit(int threads);
int thread_limit();

/// Runs body(i) for i in [0, count) on up to thread_limit() threads. Each
/// index is handled exactly once; results must not depend on the schedule.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace rough1d

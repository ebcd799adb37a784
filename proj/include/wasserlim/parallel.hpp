#pragma once

#include <cstddef>
#include <functional>

namespace wasserlim {

// Worker cap: WASSERLIM_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, n) across up to worker_count() threads.
// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wasserlim

#pragma once

#include <cstddef>
#include <functional>

namespace nlsdbar {

// Worker count: NLSDBAR_THREADS if set to a positive integer, otherwise the
// hardware concurrency.
int thread_count();

// Runs fn(i) for i in [0, n) on thread_count() workers. The first exception
// thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace nlsdbar

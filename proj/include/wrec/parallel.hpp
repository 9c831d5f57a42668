#pragma once

#include <cstddef>
#include <functional>

namespace wrec {

/// Upper bound on worker threads used by batch operations. 0 means hardware concurrency.
void set_num_threads(std::size_t n);
std::size_t num_threads();

/// Calls fn(i) for i in [0, n) across the worker pool. Each index is visited once.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wrec

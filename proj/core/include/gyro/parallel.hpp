#pragma once

#include <cstddef>
#include <functional>

namespace gyro {

// Runs body(i) for i in [0, n) on up to `threads` worker threads
// (0 or 1 runs inline). Iterations must not share mutable state. The first
// exception thrown by any iteration is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace gyro

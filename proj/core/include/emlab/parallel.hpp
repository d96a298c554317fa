#pragma once

#include <cstddef>
#include <functional>

namespace emlab {

/// Worker count for parallel loops: EMERGENCE_LAB_THREADS if set, else the
/// hardware concurrency. An explicit override (0 clears it) wins over both.
std::size_t thread_limit();
void set_thread_limit(std::size_t threads);

/// Runs body(i) for i in [0, count). Each index is handled exactly once and
/// callers write results to slot i, so output does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace emlab

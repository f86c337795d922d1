#pragma once

#include <cstddef>
#include <functional>

namespace slackcert {

/// Worker count from SLACKCERT_THREADS, else the hardware concurrency
/// (capped at 8). Never affects results, only wall time.
unsigned thread_count();

/// Runs body(0..n-1) on up to thread_count() threads. Callers write results
/// by index, so output order never depends on scheduling. The exception of
/// the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace slackcert

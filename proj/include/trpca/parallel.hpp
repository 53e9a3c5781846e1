#pragma once

#include <cstddef>
#include <functional>

namespace trpca {

/// Worker count honoring the TRPCA_THREADS environment variable
/// (0 or unset = hardware concurrency).
std::size_t thread_count();

/// Runs fn(i) for i in [0, n) across threads. Callers write results into
/// preallocated slots indexed by i, so reductions stay deterministic.
/// Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace trpca

#pragma once

#include <cstddef>
#include <functional>

namespace qgp {

/// Worker count used by parallel_for: the QGP_THREADS environment variable
/// when set to a positive integer, otherwise the hardware concurrency.
int max_threads();

/// Runs fn(begin, end) over a static partition of [0, count) across worker
/// threads. Callers must write only to disjoint, index-addressed slots, which
/// keeps results identical for every thread count. `threads` <= 0 means
/// max_threads().
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& fn,
                  int threads = 0);

}  // namespace qgp

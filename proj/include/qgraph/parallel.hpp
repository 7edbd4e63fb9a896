#ifndef QGRAPH_PARALLEL_HPP
#define QGRAPH_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace qgraph {

/// Worker count: QGRAPH_THREADS if set and positive, otherwise
/// std::thread::hardware_concurrency() (0 = auto).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
/// processed exactly once; callers write results into preallocated slots so
/// output order never depends on scheduling. After all workers finish, the
/// exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qgraph

#endif  // QGRAPH_PARALLEL_HPP

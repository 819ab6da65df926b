#ifndef TILEPERM_PARALLEL_HPP
#define TILEPERM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace tileperm {

// Runs fn(0..n-1) across up to n_threads workers pulling indices from a
// shared counter. Callers must write results keyed by index; with that
// discipline output is identical for any worker count. n_threads <= 1 runs
// inline. The first exception thrown by a worker is rethrown after join.
void parallel_for(std::size_t n, int n_threads, const std::function<void(std::size_t)>& fn);

// Worker count to use when the caller passed 0 (= auto).
int resolve_threads(int requested);

}  // namespace tileperm

#endif  // TILEPERM_PARALLEL_HPP

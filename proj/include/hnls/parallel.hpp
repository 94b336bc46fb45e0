#pragma once

#include <cstddef>
#include <functional>

namespace hnls {

// Worker count used by parallel_for; 1 runs everything inline.
void set_thread_count(int threads);
int thread_count();

// Calls body(i) for i in [0, n) on up to thread_count() workers. Each index
// runs exactly once; results must be written to per-index slots so the
// outcome does not depend on scheduling. The first exception thrown by any
// body is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hnls

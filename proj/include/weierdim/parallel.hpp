#pragma once

#include <cstddef>
#include <functional>

namespace weierdim {

// Worker count used by the library. Zero means "not set": the value of
// WEIERDIM_THREADS is used if present, otherwise the hardware concurrency.
void set_thread_count(unsigned threads);
unsigned thread_count();

// Calls body(i) for i in [0, n) on up to thread_count() workers. Each index is
// processed exactly once and results must be written to per-index slots, so the
// outcome does not depend on the worker count. The first exception thrown by
// any body is rethrown on the calling thread. Nested calls run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace weierdim

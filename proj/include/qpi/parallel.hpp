#pragma once

#include <cstdint>
#include <functional>

namespace qpi {

// Worker count for parallel enumeration: QPI_THREADS when set, otherwise
// the hardware concurrency, at least 1.
int worker_count();

// Runs fn(worker, begin, end) over a contiguous partition of [0, total)
// on worker_count() threads. fn must only touch shared state read-only;
// per-worker results are merged by the caller afterwards.
void parallel_chunks(std::uint64_t total,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn);

}  // namespace qpi

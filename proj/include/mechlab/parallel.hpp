#pragma once

#include <cstddef>
#include <functional>

namespace mechlab {

// Worker count: MECHLAB_THREADS if set (clamped to >= 1), else hardware
// concurrency. Results must not depend on this value; callers get determinism
// by using a fixed chunk size and merging chunk results in index order.
std::size_t worker_count();

// Split [0, items) into fixed-size chunks and run fn(chunk_index, begin, end)
// across workers. fn must only write to per-chunk slots; the caller merges in
// chunk order afterwards.
void parallel_chunks(std::size_t items, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

} // namespace mechlab

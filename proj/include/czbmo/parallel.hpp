#pragma once

#include <cstddef>
#include <functional>

namespace czbmo {

// Runs body(i) for i in [0, n). Work items must be independent; results are
// expected to be written to per-index slots so the merge is order-free and
// deterministic. Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  bool parallel = true);

// Worker count used by parallel_for (respects CZBMO_THREADS).
unsigned worker_count();

}  // namespace czbmo

#pragma once

#include <cstddef>
#include <functional>

namespace pns {

// Worker count: min(requested, hardware, PNS_WORKERS env override).
unsigned resolve_worker_count(unsigned requested = 0);

// Runs fn(0..count-1) on a small thread pool; rethrows the first exception.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn,
                  unsigned workers = 0);

}  // namespace pns

#pragma once

#include <cstdint>
#include <functional>

namespace fsae::threads {

// Worker budget, capped by the FSAE_THREADS environment variable.
int budget();

// Static block partition of [begin, end); fn(index, thread_id). Each index is
// visited exactly once, so writers to per-index slots need no coordination.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, int)>& fn);

}  // namespace fsae::threads

#include "fsae/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fsae::threads {

int budget() {
  int n = int(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("FSAE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, int)>& fn) {
  const std::int64_t total = end - begin;
  if (total <= 0) return;
  const int nthreads = int(std::min<std::int64_t>(budget(), total));
  if (nthreads == 1) {
    for (std::int64_t i = begin; i < end; ++i) fn(i, 0);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(size_t(nthreads));
  const std::int64_t chunk = (total + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const std::int64_t lo = begin + t * chunk;
    const std::int64_t hi = std::min(end, lo + chunk);
    workers.emplace_back([&, lo, hi, t] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i, t);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace fsae::threads

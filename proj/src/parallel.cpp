#include "pns/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pns {

unsigned resolve_worker_count(unsigned requested) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned n = requested > 0 ? requested : hw;
  if (const char* env = std::getenv("PNS_WORKERS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0 && static_cast<unsigned>(cap) < n)
      n = static_cast<unsigned>(cap);
  }
  return n;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn,
                  unsigned workers) {
  if (count == 0) return;
  unsigned n = resolve_worker_count(workers);
  if (n > count) n = static_cast<unsigned>(count);
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pns

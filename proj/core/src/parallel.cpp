#include "kohnbound/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kohnbound {

std::size_t worker_count() {
  if (const char* env = std::getenv("KOHNBOUND_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_chunks(
    std::size_t n, std::size_t chunk_size,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t chunks = chunk_count(n, chunk_size);
  const std::size_t workers = std::min(worker_count(), chunks);

  if (workers <= 1) {
    for (std::size_t ci = 0; ci < chunks; ++ci)
      body(ci, ci * chunk_size, std::min(n, (ci + 1) * chunk_size));
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t ci = next.fetch_add(1, std::memory_order_relaxed);
      if (ci >= chunks) return;
      try {
        body(ci, ci * chunk_size, std::min(n, (ci + 1) * chunk_size));
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace kohnbound

#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qgkm {

/// Worker count from the QGKM_THREADS environment variable (default 1, i.e.
/// fully sequential; results are identical regardless of the setting).
inline int thread_count() {
  const char* env = std::getenv("QGKM_THREADS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v > 1 ? v : 1;
}

/// Runs fn(k) for k in [0, count). Independent items only: fn must not touch
/// shared mutable state. The first exception thrown is rethrown to the caller
/// after all workers finish.
template <class F>
void parallel_for(std::size_t count, F&& fn) {
  const int threads = thread_count();
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace qgkm

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace sbd {

/// Runs fn(0..n-1) across `workers` threads. Callers keep determinism by
/// writing into index-addressed slots; scheduling order is irrelevant.
inline void parallel_for(std::uint64_t n, int workers,
                         const std::function<void(std::uint64_t)>& fn) {
  if (workers < 1) workers = 1;
  if (workers == 1 || n <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  const int count = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), n));
  pool.reserve(static_cast<std::size_t>(count));
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace sbd

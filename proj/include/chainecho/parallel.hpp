#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace chainecho {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Items are
/// claimed from a shared counter, so the assignment of items to threads is not
/// deterministic; callers write results by index. The first exception thrown by
/// any item is rethrown after all threads join.
template <typename Fn> void parallel_for(std::size_t count, int workers, Fn &&fn) {
  const std::size_t threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
              failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace chainecho

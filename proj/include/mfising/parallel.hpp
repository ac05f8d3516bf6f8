#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mfising {

/// Worker count from MFISING_WORKERS, else hardware concurrency (at least 1).
[[nodiscard]] unsigned default_workers();

// Calls fn(i) for i in [0, n) on up to `workers` threads. Indices are handed
// out round-robin by worker, so each result slot has a single writer. The
// first exception (by index) is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = default_workers();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    const std::size_t w = std::min<std::size_t>(workers, n);
    for (std::size_t t = 0; t < w; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += w) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mfising

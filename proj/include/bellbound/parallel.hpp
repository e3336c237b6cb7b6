#pragma once

// Index-parallel loop. Each index writes only caller-owned slots, so the
// result is identical to the sequential loop for any thread count.

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace bellbound {

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         unsigned max_threads = 0) {
  unsigned hw = max_threads ? max_threads : std::thread::hardware_concurrency();
  if (hw == 0) hw = 2;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));

  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};

  auto run = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run);
  for (std::thread& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(error);
}

}  // namespace bellbound

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cubic {

/// Worker count; 0 selects std::thread::hardware_concurrency().
struct Parallelism {
  unsigned threads = 0;

  [[nodiscard]] unsigned resolved() const {
    if (threads != 0) return threads;
    return std::max(1U, std::thread::hardware_concurrency());
  }
};

/// Runs body(block) for every block in [0, blocks), distributing blocks to
/// workers through a shared counter. The first exception thrown by any block
/// is rethrown on the calling thread after all workers stop.
template <typename Body>
void parallel_blocks(std::size_t blocks, Parallelism par, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(par.resolved(), blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        body(b);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace cubic

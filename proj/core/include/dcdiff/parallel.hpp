#pragma once

// Ordered parallel map: items are computed concurrently but committed strictly
// in index order, so floating-point reductions do not depend on thread count.

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dcdiff {

/// Threads from an explicit request, else DCDIFF_THREADS, else 1.
[[nodiscard]] unsigned resolve_thread_count(int requested);

template <typename Work, typename Commit>
void ordered_parallel_map(std::size_t n, unsigned threads, Work&& work, Commit&& commit) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) commit(i, work(i));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::size_t turn = 0;
  std::mutex mtx;
  std::condition_variable cv;
  std::exception_ptr error;
  bool failed = false;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        auto result = work(i);
        std::unique_lock lock(mtx);
        cv.wait(lock, [&] { return turn == i || failed; });
        if (failed) return;
        commit(i, std::move(result));
        ++turn;
        cv.notify_all();
      } catch (...) {
        std::lock_guard lock(mtx);
        if (!failed) error = std::current_exception();
        failed = true;
        cv.notify_all();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = threads < n ? threads : static_cast<unsigned>(n);
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dcdiff

#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nlpbma {

/* Run fn(i) for i in [0, count) on up to n_threads workers. Tasks write to
 * preallocated slots indexed by i, so results do not depend on scheduling.
 * The first captured exception is rethrown after all workers join. */
inline void parallel_for(int count, int n_threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  n_threads = std::max(1, std::min(n_threads, count));
  if (n_threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  std::atomic<int> next{0};
  for (int t = 0; t < n_threads; ++t)
    workers.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace nlpbma

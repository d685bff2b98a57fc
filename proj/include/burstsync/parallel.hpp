#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace burstsync {

/// Runs fn(task) for every task in [0, tasks) on up to `workers` threads.
/// Tasks write to their own slots; callers reduce in task order afterwards,
/// which keeps results independent of the worker count.
template <class Fn>
void parallel_tasks(std::size_t tasks, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || tasks <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
      try {
        fn(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned spawned = static_cast<unsigned>(std::min<std::size_t>(workers, tasks));
  pool.reserve(spawned);
  for (unsigned w = 0; w < spawned; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace burstsync

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace tb {

/// Worker count: `requested` if nonzero, else the process default
/// (set_default_threads, THERMO_BILLIARDS_THREADS, hardware concurrency).
unsigned resolve_threads(unsigned requested = 0);
void set_default_threads(unsigned threads);

/**
 * Run fn(task) for task in [0, n_tasks) on up to `threads` workers.
 *
 * Tasks must write only to their own output slots; callers merge the slots in
 * task order, so results do not depend on scheduling. The exception thrown by
 * the lowest-numbered failing task is rethrown after all workers join.
 */
template <class Fn>
void parallel_for(std::size_t n_tasks, unsigned threads, Fn &&fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || n_tasks <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_task = std::numeric_limits<std::size_t>::max();
  auto worker = [&] {
    for (std::size_t t = next++; t < n_tasks; t = next++) {
      try {
        fn(t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (t < error_task) {
          error_task = t;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n_workers = std::min<std::size_t>(threads, n_tasks);
  pool.reserve(n_workers);
  for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto &th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace tb

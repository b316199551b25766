#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace echelon {

/// Worker count: ECHELON_JOBS wins over the requested value; at least 1.
inline int resolve_jobs(int requested) {
  if (const char* env = std::getenv("ECHELON_JOBS"); env != nullptr && *env != '\0') {
    try {
      requested = std::stoi(env);
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return std::max(requested, 1);
}

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. Callers write
/// results by index, so the outcome never depends on scheduling. The first
/// exception thrown by any call is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < std::min(workers, n); ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace echelon

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tracesum {

/// Worker cap for parallel loops; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs f(i) for i in [0, n) on up to thread_count() workers. Rethrows the first exception.
template <class F>
void parallel_for(size_t n, F&& f) {
  const unsigned workers = static_cast<unsigned>(std::min<size_t>(thread_count(), n));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace tracesum

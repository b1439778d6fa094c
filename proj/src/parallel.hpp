#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace refmlm::detail {

inline unsigned resolve_threads(unsigned requested) noexcept
{
  if (requested != 0)
    return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Calls fn(i) for every i in [0, n) across up to `threads` workers. Work
// items must write disjoint outputs; the first exception is rethrown.
template<class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++)
        fn(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure)
        failure = std::current_exception();
      next = n;
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t)
    pool.emplace_back(body);
  body();
  for (auto& th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace refmlm::detail

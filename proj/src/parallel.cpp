#include "sig/parallel.hpp"

#include "sig/errors.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sig {

namespace {
std::atomic<int> g_default_threads{1};
} // namespace

int default_thread_count() { return g_default_threads.load(std::memory_order_relaxed); }

void set_default_thread_count(int threads) {
  if (threads < 1) {
    throw DomainError("thread count must be at least one");
  }
  g_default_threads.store(threads, std::memory_order_relaxed);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads) {
  if (threads == 0) {
    threads = default_thread_count();
  }
  if (threads < 1) {
    throw DomainError("thread count must be at least one");
  }
  if (n == 0) {
    return;
  }
  const auto workers = static_cast<std::size_t>(threads) < n
                           ? static_cast<std::size_t>(threads)
                           : n;
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run_range = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t i = begin; i < end; ++i) {
        fn(i);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) {
        first_error = std::current_exception();
      }
    }
  };

  const std::size_t chunk = n / workers;
  const std::size_t rem = n % workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t end = begin + chunk + (w < rem ? 1 : 0);
    if (w + 1 == workers) {
      run_range(begin, end);
    } else {
      pool.emplace_back(run_range, begin, end);
    }
    begin = end;
  }
  for (auto& t : pool) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

} // namespace sig

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "pntap/kahan.hpp"

namespace pntap {

// Worker count used by the block-parallel kernels. 0 selects hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

namespace detail {
// Set on worker threads so nested kernels run serially inside a task.
inline thread_local bool in_worker = false;
}

// Runs fn(i) for i in [0, count) on the configured number of workers.
// The first exception thrown by any task is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  unsigned workers = detail::in_worker ? 1 : std::min<std::size_t>(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    detail::in_worker = true;
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Splits [begin, end) into blocks of fixed size, evaluates block(lo, hi) for
// each, and folds the block results in block order. Block boundaries do not
// depend on the worker count, so the result is bit-identical for any number
// of threads.
template <typename T, typename BlockFn>
T block_sum(std::uint64_t begin, std::uint64_t end, std::uint64_t block_size, BlockFn&& block) {
  if (end <= begin) return T{};
  std::uint64_t blocks = (end - begin + block_size - 1) / block_size;
  std::vector<T> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    std::uint64_t lo = begin + b * block_size;
    std::uint64_t hi = std::min(end, lo + block_size);
    partial[b] = block(lo, hi);
  });
  compensated_sum<T> total;
  for (const auto& v : partial) total += v;
  return total.get();
}

} // namespace pntap

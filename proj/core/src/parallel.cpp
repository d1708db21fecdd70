#include "rough1d/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rough1d {

namespace {

std::atomic<int>& limit_slot() {
  static std::atomic<int> limit{std::max(1, static_cast<int>(std::thread::hardware_concurrency()))};
  return limit;
}

}  // namespace

void set_thread_limit(int threads) { limit_slot().store(std::max(1, threads)); }

int thread_limit() { return limit_slot().load(); }

void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = std::min(thread_limit(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_guard;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_guard);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rough1d

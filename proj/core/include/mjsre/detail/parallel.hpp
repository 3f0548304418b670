#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mjsre {

template <class Task>
void parallel_for(std::int64_t count, int workers, Task&& task) {
  if (count <= 0) return;
  const int threads = static_cast<int>(std::clamp<std::int64_t>(workers, 1, count));
  std::atomic<std::int64_t> next{0};
  std::mutex error_mutex;
  std::int64_t error_index = count;
  std::exception_ptr error;

  auto body = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };

  if (threads == 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(body);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace mjsre

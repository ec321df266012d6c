#include "ergomix/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ergomix {

std::size_t worker_count() {
  const char* env = std::getenv("ERGOMIX_THREADS");
  long requested = 0;
  if (env != nullptr && *env != '\0') {
    try {
      requested = std::stol(env);
    } catch (const std::exception&) {
      requested = 0;
    }
  }
  if (requested > 0) return static_cast<std::size_t>(requested);
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t align) {
  if (n == 0) return;
  align = std::max<std::size_t>(1, align);
  const std::size_t blocks = (n + align - 1) / align;
  const std::size_t workers = std::min(worker_count(), blocks);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::size_t per = (blocks + workers - 1) / workers;
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * per * align);
    const std::size_t end = std::min(n, (w + 1) * per * align);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ergomix

#include "ebseq/reduce.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "ebseq/errors.hpp"

namespace ebseq {

int resolve_worker_count() {
  if (const char* env = std::getenv("EBSEQ_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w < 1) throw config_error("EBSEQ_WORKERS must be >= 1");
      return w;
    } catch (const config_error&) {
      throw;
    } catch (const std::exception&) {
      throw config_error(std::string("EBSEQ_WORKERS is not an integer: ") + env);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(long count, int workers, const std::function<void(long)>& fn) {
  if (count <= 0) return;
  const int used = static_cast<int>(std::min<long>(workers, count));
  if (used <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(used));
  std::exception_ptr first_error;
  std::atomic<bool> has_error{false};
  std::mutex error_lock;
  for (int t = 0; t < used; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> hold(error_lock);
          if (!has_error.exchange(true)) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (has_error.load()) std::rethrow_exception(first_error);
}

}  // namespace ebseq

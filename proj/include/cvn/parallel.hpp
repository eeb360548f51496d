// Small fork-join helper. The worker count comes from CVN_RIGIDITY_THREADS
// when set, otherwise from the hardware.

#ifndef CVN_PARALLEL_HPP_
#define CVN_PARALLEL_HPP_

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace cvn {

int thread_count();

// Runs fn(i) for i in [0, n) and returns the results in index order. The
// first exception thrown by any task is rethrown after all workers join.
template <typename R>
std::vector<R> parallel_map(std::size_t n, std::function<R(std::size_t)> const& fn) {
  std::vector<R> out(n);
  std::size_t const workers = std::min<std::size_t>(n, static_cast<std::size_t>(thread_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace cvn

#endif  // CVN_PARALLEL_HPP_

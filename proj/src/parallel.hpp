#ifndef SHAPEEVAL_SRC_PARALLEL_HPP_
#define SHAPEEVAL_SRC_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace shapeeval::internal {

inline std::size_t ResolveThreads(std::size_t requested) {
  if (requested != 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, n) on up to `threads` workers with a static
// interleaved split. The first exception (lowest index) is rethrown.
template <typename Body>
void ParallelFor(std::size_t n, std::size_t threads, Body&& body) {
  threads = std::min(ResolveThreads(threads), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace shapeeval::internal

#endif  // SHAPEEVAL_SRC_PARALLEL_HPP_

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace paintph {

/// Run body(i) for i in [0, n) on up to `workers` threads. Each index runs
/// exactly once; if several bodies throw, the exception from the smallest
/// index is rethrown so failures are reported deterministically.
template <typename Body>
void parallel_for(Eigen::Index n, int workers, Body&& body) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<Eigen::Index>(n, 1))));
  if (workers == 1) {
    for (Eigen::Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<Eigen::Index> next{0};
  std::mutex error_mutex;
  Eigen::Index error_index = n;
  std::exception_ptr error;

  auto run = [&] {
    for (Eigen::Index i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace paintph

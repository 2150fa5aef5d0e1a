#pragma once

#include <Eigen/Dense>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ergolab {

// Worker count: ERGOLAB_THREADS caps it, hardware concurrency is the default.
inline int worker_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  int n = static_cast<int>(hw);
  if (const char* env = std::getenv("ERGOLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

// Static chunking over [0, count). Each index writes only its own slots, so
// results do not depend on the schedule.
inline void parallel_for(Eigen::Index count,
                         const std::function<void(Eigen::Index)>& body) {
  const int workers = worker_count();
  if (workers <= 1 || count < 2) {
    for (Eigen::Index i = 0; i < count; ++i) body(i);
    return;
  }
  const int used = static_cast<int>(
      std::min<Eigen::Index>(count, static_cast<Eigen::Index>(workers)));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(used));
  for (int w = 0; w < used; ++w) {
    pool.emplace_back([&, w]() {
      for (Eigen::Index i = w; i < count; i += used) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ergolab

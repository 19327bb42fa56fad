#pragma once

#include "sinrperc/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace sinrperc {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// out[k] = fn(k) for k in [0, n), computed by up to `workers` threads. The
/// result depends only on fn, never on the scheduling. The exception of the
/// lowest failing index is rethrown.
template <typename Fn>
auto parallel_map(Index n, int workers, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, Index>> {
  using T = std::invoke_result_t<Fn&, Index>;
  std::vector<T> out(static_cast<std::size_t>(std::max<Index>(n, 0)));
  std::vector<std::exception_ptr> errors(out.size());
  std::atomic<Index> next{0};
  const auto work = [&] {
    for (Index k = next++; k < n; k = next++) {
      try {
        out[k] = fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int w = static_cast<int>(std::min<Index>(resolve_workers(workers), std::max<Index>(n, 1)));
  if (w <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < w; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace sinrperc

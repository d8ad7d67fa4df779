#pragma once

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <cstddef>
#include <type_traits>
#include <vector>

namespace permod {

// out[i] = fn(i) for i < n, evaluated in parallel. Results land by index,
// so any reduction the caller does over `out` is schedule independent.
template <class F>
auto parallel_map(std::size_t n, F&& fn) {
  using R = std::decay_t<decltype(fn(std::size_t{}))>;
  std::vector<R> out(n);
  if (n == 1) {
    out[0] = fn(0);
    return out;
  }
  tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n), [&](const auto& r) {
    for (std::size_t i = r.begin(); i != r.end(); ++i) out[i] = fn(i);
  });
  return out;
}

// Runs fn with at most `workers` threads; 0 means the TBB default.
template <class F>
auto with_workers(unsigned workers, F&& fn) {
  if (workers == 0) return fn();
  tbb::task_arena arena(static_cast<int>(workers));
  return arena.execute(fn);
}

}  // namespace permod

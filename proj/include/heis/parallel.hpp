#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace heis {

/// Worker count: HEIS_THREADS if set, else the hardware concurrency.
inline size_t thread_cap() {
  if (const char* e = std::getenv("HEIS_THREADS")) {
    try {
      const long v = std::stol(e);
      if (v >= 1) return static_cast<size_t>(v);
    } catch (const std::exception&) {
    }
    return 1;
  }
  return std::max<size_t>(1, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0, n) on up to thread_cap() threads in contiguous
/// blocks. f must only write to per-index state; the first exception is rethrown.
template <class F>
void parallel_for(size_t n, F&& f) {
  const size_t t = std::min(thread_cap(), n);
  if (t <= 1) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errs(t);
  std::vector<std::thread> pool;
  for (size_t w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w * n / t; i < (w + 1) * n / t; ++i) f(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace heis

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace twtsim {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Results must be
/// written into per-index slots so the merge is order-independent.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  if (count == 0) return;
  if (jobs <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct MeanStderr {
  double mean = 0;
  double stderr_ = 0;
  std::size_t n = 0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr ms;
  ms.n = xs.size();
  if (xs.empty()) return ms;
  double sum = 0;
  for (double x : xs) sum += x;
  ms.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return ms;
  double ss = 0;
  for (double x : xs) ss += (x - ms.mean) * (x - ms.mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  ms.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
  return ms;
}

/// Stable numeric formatting for CSV output.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace twtsim

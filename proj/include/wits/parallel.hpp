#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

#include <omp.h>

namespace wits {

/// Serial is the reference path; Parallel must reproduce it bit-for-bit.
enum class Execution { Serial, Parallel };

/// Evaluates f(i) for i in [0, n) and stores the results in index order.
/// The first exception thrown by any worker is rethrown on the caller thread.
template <class T, class F>
std::vector<T> parallel_map_index(std::size_t n, F&& f, Execution ex) {
  std::vector<T> out(n);
  if (ex == Execution::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

template <class F>
std::vector<double> map_grid(std::span<const double> xs, F&& f, Execution ex) {
  return parallel_map_index<double>(
      xs.size(), [&](std::size_t i) { return f(xs[i]); }, ex);
}

/// n evenly spaced points from lo to hi inclusive (n >= 2), or {lo} when n == 1.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Sets the OpenMP worker count; 0 keeps the runtime default.
void set_thread_count(int threads);

}  // namespace wits

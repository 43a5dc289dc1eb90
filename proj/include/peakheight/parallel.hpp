#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>
#include <vector>

namespace peakheight {

/// How chunked kernels are scheduled. kSerial is the reference path kept
/// for testing; both paths produce bit-identical results because work is
/// split into a fixed number of chunks and reduced in chunk order.
enum class Execution { kParallel, kSerial };

/// Chunk count for Monte-Carlo kernels. Independent of the worker count.
inline constexpr std::size_t kDefaultChunks = 64;

/// First item of chunk k when n items are split as evenly as possible.
inline std::size_t chunk_begin(std::size_t n, std::size_t n_chunks, std::size_t k) {
  const std::size_t base = n / n_chunks;
  const std::size_t extra = n % n_chunks;
  return k * base + (k < extra ? k : extra);
}

/// Runs fn(k) for k in [0, n_chunks) and returns the results in chunk order.
template <class Result, class Fn>
std::vector<Result> run_chunks(std::size_t n_chunks, Fn&& fn, Execution exec) {
  std::vector<Result> out(n_chunks);
  if (exec == Execution::kSerial) {
    for (std::size_t k = 0; k < n_chunks; ++k) out[k] = fn(k);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const long long count = static_cast<long long>(n_chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long k = 0; k < count; ++k) {
    try {
      out[static_cast<std::size_t>(k)] = fn(static_cast<std::size_t>(k));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace peakheight

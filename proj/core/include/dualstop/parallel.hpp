#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dualstop {

// Paths are processed in chunks of this many. The chunk decomposition depends
// only on the path count, never on the thread count, so every reduction below
// produces bit-identical results for any number of workers.
inline constexpr std::size_t kPathChunk = 256;

// Number of worker threads used by for_each_chunk. 0 selects
// std::thread::hardware_concurrency().
void set_thread_count(unsigned threads);
unsigned thread_count();

// Calls fn(chunk, begin, end) for every chunk [begin, end) of [0, n).
// Chunks may run concurrently; fn must only write chunk-private state.
// The first exception thrown by any chunk is rethrown after all workers join.
void for_each_chunk(
    std::size_t n, std::size_t chunk_size,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

// Fixed-order pairwise (tree) summation.
double pairwise_sum(std::span<const double> values);

// Element-wise pairwise reduction of equally sized partial vectors, merged in
// index order.
std::vector<double> pairwise_sum_rows(std::vector<std::vector<double>> rows);

}  // namespace dualstop

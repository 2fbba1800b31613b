#include "dualstop/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace dualstop {
namespace {

std::atomic<unsigned> g_threads{1};

double pairwise_range(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_range(data, half) + pairwise_range(data + half, n - half);
}

}  // namespace

void set_thread_count(unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  g_threads.store(threads);
}

unsigned thread_count() { return g_threads.load(); }

void for_each_chunk(
    std::size_t n, std::size_t chunk_size,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
  const std::size_t chunks = chunk_count(n, chunk_size);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_count(), chunks));

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    fn(c, begin, std::min(n, begin + chunk_size));
  };

  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      try {
        run_chunk(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) {
  return pairwise_range(values.data(), values.size());
}

std::vector<double> pairwise_sum_rows(std::vector<std::vector<double>> rows) {
  if (rows.empty()) return {};
  const std::size_t width = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != width) throw std::invalid_argument("ragged partial rows");
  }
  for (std::size_t stride = 1; stride < rows.size(); stride *= 2) {
    for (std::size_t i = 0; i + stride < rows.size(); i += 2 * stride) {
      auto& dst = rows[i];
      const auto& src = rows[i + stride];
      for (std::size_t k = 0; k < width; ++k) dst[k] += src[k];
    }
  }
  return std::move(rows.front());
}

}  // namespace dualstop

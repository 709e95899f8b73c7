#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace ffm {

inline constexpr std::uint64_t kChunkSize = 2048;

/// 0 means one worker per hardware thread.
inline unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, n) into fixed chunks, evaluates chunk_fn(lo, hi) on a worker pool
/// and folds the chunk results in chunk order. The chunking does not depend on
/// the thread count, so the result is the same for any `threads`.
template <class T, class ChunkFn, class Combine>
T parallel_reduce(std::uint64_t n, unsigned threads, T init, ChunkFn&& chunk_fn, Combine&& combine,
                  std::uint64_t chunk = kChunkSize) {
  if (n == 0) return init;
  const std::uint64_t chunks = (n + chunk - 1) / chunk;
  std::vector<std::optional<T>> parts(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        parts[c] = chunk_fn(c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };

  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), chunks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  for (auto& part : parts) init = combine(std::move(init), std::move(*part));
  return init;
}

/// Sum of term(i) over [0, n) with the deterministic chunked reduction.
template <class T, class Term>
T parallel_sum(std::uint64_t n, unsigned threads, Term&& term, T zero = T{}) {
  return parallel_reduce(
      n, threads, zero,
      [&](std::uint64_t lo, std::uint64_t hi) {
        T acc = zero;
        for (std::uint64_t i = lo; i < hi; ++i) acc += term(i);
        return acc;
      },
      [](T a, T b) {
        a += b;
        return a;
      });
}

}  // namespace ffm

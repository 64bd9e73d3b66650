#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace qeq {

// Partition count is fixed (independent of the thread count) and partial
// results are combined in partition order, so any thread count produces
// bit-identical results.
inline constexpr int kPartitions = 64;

inline int& thread_count() {
  static int n = 1;
  return n;
}

// Evaluate chunk_fn over kPartitions contiguous sub-ranges of [lo, hi] and
// fold the partial results in order with combine(acc, partial).
template <class T, class ChunkFn, class Combine>
T chunked_reduce(std::uint64_t lo, std::uint64_t hi, T init, ChunkFn chunk_fn, Combine combine) {
  if (hi < lo) return init;
  const std::uint64_t n = hi - lo + 1;
  const int parts = static_cast<int>(std::min<std::uint64_t>(kPartitions, n));
  std::vector<T> partials(parts, init);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= parts) return;
      const std::uint64_t a = lo + n * std::uint64_t(i) / parts;
      const std::uint64_t b = lo + n * std::uint64_t(i + 1) / parts - 1;
      partials[i] = chunk_fn(a, b);
    }
  };
  const int threads = std::max(1, thread_count());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  T acc = init;
  for (const T& p : partials) acc = combine(acc, p);
  return acc;
}

}  // namespace qeq

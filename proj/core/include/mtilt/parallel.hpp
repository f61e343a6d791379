#pragma once

#include <atomic>
#include <thread>
#include <utility>
#include <vector>

namespace mtilt {

// Worker count for a run: a positive request wins, then the MTILT_WORKERS
// environment variable, then hardware concurrency. Always at least 1.
int resolve_workers(int requested);

inline constexpr long kReplicateBlock = 8192;

// Deterministic blocked reduction over replicate indices [0, replicates).
// The block structure depends only on the replicate count, each block folds
// sequentially in index order, and block partials merge in block order, so
// the result is identical for every worker count. Acc needs a default
// constructor and merge(const Acc&); per_replicate(acc, index) must derive
// all randomness from the index.
template <typename Acc, typename Fn>
Acc parallel_reduce_replicates(long replicates, int workers,
                               Fn&& per_replicate) {
  const long blocks =
      replicates <= 0 ? 0 : (replicates + kReplicateBlock - 1) / kReplicateBlock;
  std::vector<Acc> partials(static_cast<std::size_t>(blocks));
  auto run_block = [&](long b) {
    Acc local;
    const long begin = b * kReplicateBlock;
    const long end = std::min(replicates, begin + kReplicateBlock);
    for (long i = begin; i < end; ++i) per_replicate(local, i);
    partials[static_cast<std::size_t>(b)] = std::move(local);
  };
  const int active = std::min<long>(resolve_workers(workers), blocks);
  if (active <= 1) {
    for (long b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(active));
    for (int t = 0; t < active; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const long b = next.fetch_add(1, std::memory_order_relaxed);
          if (b >= blocks) return;
          run_block(b);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  Acc total;
  for (auto& p : partials) total.merge(p);
  return total;
}

}  // namespace mtilt

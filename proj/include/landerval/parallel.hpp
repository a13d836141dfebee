#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace landerval {

// Runs fn(0..n-1) on up to `parallelism` threads. Callers store per-index
// results and reduce in index order afterwards, which keeps every statistic
// byte-identical across parallelism levels and schedules.
template <typename Fn>
void parallel_for_indexed(std::uint64_t n, int parallelism, Fn&& fn) {
    const std::uint64_t cap = std::max<std::uint64_t>(n, 1);
    const int workers =
        static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(parallelism, 1)), cap));
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace landerval

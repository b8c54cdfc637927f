#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace convexjet {

/// Worker cap: CONVEXJET_THREADS when set, else hardware concurrency, in [1, 16].
inline int worker_count() {
    if (const char* env = std::getenv("CONVEXJET_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return std::min(n, 16);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
}

/// Runs fn(begin, end) over fixed-size blocks of [0, n). Block boundaries do
/// not depend on the number of workers, so block-local computations are
/// reproducible under any thread setting.
inline void parallel_blocks(std::size_t n, std::size_t block, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    int workers = worker_count();
    std::size_t n_blocks = (n + block - 1) / block;
    if (workers == 1 || n_blocks == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) fn(b * block, std::min(n, (b + 1) * block));
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= n_blocks) return;
                fn(b * block, std::min(n, (b + 1) * block));
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace convexjet

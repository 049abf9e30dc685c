#pragma once
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace llf {

// Worker count: --threads flag value if set (>0), else LOGLOG_FORGE_THREADS,
// else hardware concurrency.
inline unsigned worker_count(unsigned override_threads = 0) {
    if (override_threads > 0) return override_threads;
    if (const char* env = std::getenv("LOGLOG_FORGE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Parallel map over [0, n). Each item writes only its own slot, so results
// are deterministic regardless of scheduling.
template <class F>
void parallel_for(std::size_t n, F&& body, unsigned threads = 0) {
    unsigned w = std::min<std::size_t>(worker_count(threads), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < w; ++t)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                body(i);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace llf

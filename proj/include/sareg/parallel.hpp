#pragma once

// Minimal deterministic parallel-for. Work items are indexed; each worker
// owns a static stripe and writes only to its own output slots, so results
// are identical for any thread count. SAREG_THREADS caps the pool.

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace sareg {

inline unsigned thread_count() {
    if (const char* env = std::getenv("SAREG_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    unsigned workers = thread_count();
    if (workers <= 1 || count < 2 * workers) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace sareg

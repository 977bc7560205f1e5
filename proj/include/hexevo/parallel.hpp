#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace hexevo {

// Run fn(0..n-1) on up to `threads` workers (0 = hardware concurrency).
// Work items must not depend on execution order.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        threads = hw > 0 ? static_cast<int>(hw) : 1;
    }
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

}  // namespace hexevo

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace tomo {

/// Runs body(i) for i in [0, n) on up to n_threads workers. Callers write
/// results into per-index slots, so output does not depend on scheduling.
/// body must not throw.
template <typename Body>
void parallel_for(std::size_t n, int n_threads, Body&& body) {
    const auto workers = static_cast<std::size_t>(std::max(1, n_threads));
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    }
}

}  // namespace tomo

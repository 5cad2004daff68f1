#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace limloc {

// Worker count: explicit request, else LIMLOC_THREADS, else hardware.
unsigned resolve_threads(unsigned requested = 0);

// Evaluate fn(0..n-1) across a thread pool. Each index owns its own random
// substream, and results land at their index, so the output is identical for
// any worker count.
template <class R>
std::vector<R> mc_map(std::uint64_t n, unsigned threads,
                      const std::function<R(std::uint64_t)>& fn) {
    std::vector<R> results(n);
    const unsigned workers = resolve_threads(threads);
    if (workers <= 1 || n < 2) {
        for (std::uint64_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::uint64_t i = w; i < n; i += workers) results[i] = fn(i);
        });
    }
    for (auto& th : pool) th.join();
    return results;
}

} // namespace limloc

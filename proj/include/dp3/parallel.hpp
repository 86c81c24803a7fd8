#pragma once

// Minimal deterministic work-sharing: parallel_for_index splits [0, n) into
// contiguous chunks across worker threads.  Results must be written to
// disjoint, pre-sized slots so that the output is independent of the thread
// count.  The worker count comes from the DP3_THREADS environment variable
// (default 1 = serial).

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace dp3 {

inline unsigned worker_count() {
    if (const char* env = std::getenv("DP3_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 64));
    }
    return 1;
}

template <typename Fn>
void parallel_for_index(std::size_t n, Fn&& body) {
    const unsigned workers = std::min<std::size_t>(worker_count(), n == 0 ? 1 : n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace dp3

#pragma once

#include <thread>
#include <vector>
#include <functional>

namespace mixlab {

// Static-partition parallel loop over [0, n). Each worker gets one contiguous
// chunk, so writes are disjoint and results do not depend on the thread count.
// Reductions must be done by the caller in index order afterwards.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& body) {
    if (n <= 0) return;
    if (threads <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    const int nw = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nw - 1);
    auto run_chunk = [&body](int lo, int hi) {
        for (int i = lo; i < hi; ++i) body(i);
    };
    const int chunk = (n + nw - 1) / nw;
    for (int w = 1; w < nw; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo < hi) pool.emplace_back(run_chunk, lo, hi);
    }
    run_chunk(0, std::min(n, chunk));
    for (auto& t : pool) t.join();
}

} // namespace mixlab

#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace qcdg {

/// Static contiguous partition of [0, n) over `workers` threads. Bodies must
/// write only their own index's slots; all reductions happen afterwards in
/// index order, so results are identical for any worker count.
template <typename Fn>
void parallel_for(int n, int workers, Fn&& fn) {
    if (workers <= 1 || n < 2 * workers) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    const int k = std::min(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(k);
    for (int w = 0; w < k; ++w) {
        const int lo = static_cast<int>(static_cast<long long>(n) * w / k);
        const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / k);
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace qcdg

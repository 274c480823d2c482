#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fgeom {

/// Thread count from FGEOM_THREADS, else the hardware concurrency.
inline int default_threads()
{
    if (const char* env = std::getenv("FGEOM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(begin, end) over contiguous chunks of [0, n).
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn)
{
    threads = std::clamp(threads, 1, std::max(1, n));
    if (threads == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int b = t * chunk, e = std::min(n, b + chunk);
        if (b < e)
            pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& th : pool)
        th.join();
}

} // namespace fgeom

#ifndef HTMP_PARALLEL_HPP
#define HTMP_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace htmp {

// Worker cap from HTMP_LAB_THREADS (>= 1); hardware concurrency otherwise.
inline int worker_count() {
    if (const char* env = std::getenv("HTMP_LAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Index-parallel loop. Each index is processed exactly once and writes only
// to its own slot, so results do not depend on the worker count.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    int workers = worker_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace htmp

#endif

#ifndef ARITHDYN_PARALLEL_HPP
#define ARITHDYN_PARALLEL_HPP

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace arithdyn {

// Thread cap from ARITHDYN_THREADS; defaults to sequential execution.
inline int thread_count() {
    const char* env = std::getenv("ARITHDYN_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    if (n < 1) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw > 0 && n > static_cast<int>(hw)) n = static_cast<int>(hw);
    return n;
}

// Index-block parallel loop with deterministic work assignment; results must
// be written to preallocated slots so the merge order is fixed.
inline void parallel_for(long n, const std::function<void(long)>& body) {
    int threads = thread_count();
    if (threads <= 1 || n < 2 * threads) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t]() {
            for (long i = t; i < n; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace arithdyn

#endif

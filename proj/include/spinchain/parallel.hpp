#ifndef SPINCHAIN_PARALLEL_HPP
#define SPINCHAIN_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace spinchain {

// Default worker count: SPINCHAIN_WORKERS if set, else 1.
inline int default_workers() {
    if (const char* env = std::getenv("SPINCHAIN_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

// Runs fn(i) for i in [0, n). Each index is processed by exactly one worker
// and fn must write only to state owned by index i, so results are identical
// for any worker count. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_for_index(std::size_t n, int workers, Fn&& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t n_threads = std::min<std::size_t>(workers, n);
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < n; i += n_threads) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace spinchain

#endif

#pragma once

#include <complex>
#include <functional>
#include <thread>
#include <vector>

namespace hodgeci {

inline int effective_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Deterministic parallel map-reduce: i-th term is computed by some worker but
/// the reduction is performed in index order, so results are bit-identical for
/// any worker count.
inline std::complex<double> ordered_parallel_sum(
    size_t n, int workers, const std::function<std::complex<double>(size_t)>& term) {
    workers = effective_workers(workers);
    if (workers <= 1 || n < 64) {
        std::complex<double> acc = 0;
        for (size_t i = 0; i < n; ++i) acc += term(i);
        return acc;
    }
    std::vector<std::complex<double>> vals(n);
    std::vector<std::thread> pool;
    size_t chunk = (n + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (size_t i = lo; i < hi; ++i) vals[i] = term(i);
        });
    }
    for (auto& th : pool) th.join();
    std::complex<double> acc = 0;
    for (size_t i = 0; i < n; ++i) acc += vals[i];
    return acc;
}

} // namespace hodgeci

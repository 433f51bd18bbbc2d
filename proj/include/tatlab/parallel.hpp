#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tatlab {

/// Static block partition of [0, n) across `workers` threads. Each index is
/// processed exactly once and results must be written to per-index slots, so
/// the outcome is independent of the worker count.
inline void parallel_for(long n, int workers, const std::function<void(long)>& body) {
    if (n <= 0) return;
    if (workers <= 1 || n == 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    const int used = static_cast<int>(std::min<long>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(used);
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    for (int w = 0; w < used; ++w) {
        const long lo = n * w / used;
        const long hi = n * (w + 1) / used;
        pool.emplace_back([&, lo, hi]() {
            try {
                for (long i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline int default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace tatlab

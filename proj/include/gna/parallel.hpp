#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gna {

// Runs fn(begin, end) over contiguous chunks of [0, n). The partition depends
// only on (n, threads), never on scheduling, so results written to
// per-index slots are identical for any thread count.
template <typename Fn>
void parallel_for(long n, int threads, Fn&& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2 * threads) {
        fn(0L, n);
        return;
    }
    long chunk = (n + threads - 1) / threads;
    std::vector<std::thread> workers;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 1; t < threads; ++t) {
        long begin = t * chunk;
        long end = std::min(n, begin + chunk);
        if (begin >= end)
            break;
        workers.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        });
    }
    try {
        fn(0L, std::min(n, chunk));
    } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error)
            error = std::current_exception();
    }
    for (auto& w : workers)
        w.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace gna

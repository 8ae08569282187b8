#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace modgauss {

// Runs f(i) for i in [0, count) on `threads` workers with static striping.
// Work items must be independent; results are written by index.
template <class F>
void parallel_for(long long count, int threads, F&& f) {
    threads = std::max(1, threads);
    if (threads == 1 || count < 2) {
        for (long long i = 0; i < count; ++i) f(i);
        return;
    }
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (long long i = t; i < count; i += threads) f(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace modgauss

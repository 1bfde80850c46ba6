#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace wavedamp {

/// Runs fn(i) for i in [0, n) on up to `workers` threads.  Tasks must write
/// only to their own slots; the first thrown exception is rethrown on the
/// caller after all threads join, so results stay deterministic in the
/// failure path too.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::once_flag error_once;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::call_once(error_once, [&] { error = std::current_exception(); });
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(workers)));
    pool.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace wavedamp

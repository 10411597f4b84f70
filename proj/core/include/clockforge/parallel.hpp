#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace clockforge {

/// Runs fn(i) for i in [0, count) on a pool of `jobs` workers (0 = hardware
/// concurrency). Completion order is arbitrary; callers own result slots
/// indexed by i, so reductions stay deterministic. The first exception is
/// rethrown after all workers join.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    unsigned n_workers = jobs > 0 ? static_cast<unsigned>(jobs) : std::thread::hardware_concurrency();
    if (n_workers == 0) n_workers = 1;
    if (n_workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (n_workers > count) n_workers = static_cast<unsigned>(count);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace clockforge

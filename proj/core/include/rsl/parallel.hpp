#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rsl {

// Worker count: hardware concurrency capped by the RSL_THREADS env var.
inline std::size_t worker_count() {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* cap = std::getenv("RSL_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(cap, &end, 10);
        if (end != cap && v >= 1 && static_cast<std::size_t>(v) < n)
            n = static_cast<std::size_t>(v);
    }
    return n;
}

// Runs fn(i) for i in [0, n). Results must be written to index-addressed
// storage by the caller; the chunked schedule is static, so any subsequent
// sequential reduction is deterministic.
template <typename F>
void parallel_for(std::int64_t n, F&& fn) {
    if (n <= 0) return;
    const std::size_t workers =
        std::min<std::size_t>(worker_count(), static_cast<std::size_t>(n));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::int64_t chunk = (n + static_cast<std::int64_t>(workers) - 1) /
                               static_cast<std::int64_t>(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
        const std::int64_t end = std::min<std::int64_t>(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::int64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace rsl

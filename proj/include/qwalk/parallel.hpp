#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qwalk {

inline unsigned default_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

// Calls fn(i) for i in [0, count) on up to `threads` workers. Work is handed
// out in blocks; fn must write only to slots owned by i, so the result does
// not depend on the schedule. The first exception is rethrown.
template <class Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn, std::uint64_t block = 64) {
    if (threads <= 1 || count <= block) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            while (true) {
                const std::uint64_t begin = next.fetch_add(block);
                if (begin >= count) break;
                const std::uint64_t end = std::min(count, begin + block);
                for (std::uint64_t i = begin; i < end; ++i) fn(i);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(count);
        }
    };
    const unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(threads, (count + block - 1) / block));
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace qwalk

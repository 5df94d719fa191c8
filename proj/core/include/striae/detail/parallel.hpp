#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace striae::detail {

inline unsigned resolve_threads(int threads) {
    if (threads > 0) return static_cast<unsigned>(threads);
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs fn over contiguous chunks of [0, n). Work is partitioned statically,
/// so the set of (begin, end) calls is independent of scheduling; callers
/// writing to disjoint slots get deterministic results. The first exception
/// thrown by any chunk is rethrown on the calling thread.
inline void parallel_chunks(std::size_t n, int threads,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
    const unsigned t = resolve_threads(threads);
    if (n == 0) return;
    if (t <= 1 || n == 1) {
        fn(0, n);
        return;
    }
    const std::size_t n_chunks = std::min<std::size_t>(t, n);
    std::vector<std::thread> workers;
    workers.reserve(n_chunks);
    std::vector<std::exception_ptr> errors(n_chunks);
    for (std::size_t c = 0; c < n_chunks; ++c) {
        const std::size_t begin = n * c / n_chunks;
        const std::size_t end = n * (c + 1) / n_chunks;
        workers.emplace_back([&, c, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace striae::detail

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace citeclass {

/// Number of workers to use when the caller passes 0.
inline unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Splits [0, n) into `chunks` contiguous ranges and runs fn(chunk, begin, end)
/// on up to `workers` threads. Chunk boundaries depend only on n and chunks,
/// so per-chunk outputs merged in chunk order are independent of `workers`.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t chunks, unsigned workers, Fn&& fn) {
    if (n == 0) return;
    chunks = std::clamp<std::size_t>(chunks, 1, n);
    const std::size_t per = (n + chunks - 1) / chunks;
    chunks = (n + per - 1) / per;
    workers = static_cast<unsigned>(std::clamp<std::size_t>(workers == 0 ? default_workers() : workers, 1, chunks));

    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(c, c * per, std::min(n, (c + 1) * per));
        return;
    }

    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t c = w; c < chunks; c += workers) fn(c, c * per, std::min(n, (c + 1) * per));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace citeclass

#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace confla {

/// Splits [0, count) into contiguous chunks and runs fn(begin, end, chunk)
/// on up to `threads` workers. The chunking depends only on (count,
/// threads); callers combine per-chunk results in chunk order. The first
/// exception thrown by a worker is rethrown on the calling thread.
template <class Fn>
void parallel_chunks(std::uint64_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1U, threads);
    const std::uint64_t chunks = std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1));
    if (chunks <= 1) {
        fn(std::uint64_t{0}, count, std::size_t{0});
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(chunks);
    const std::uint64_t per = (count + chunks - 1) / chunks;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        const std::uint64_t begin = std::min(count, c * per);
        const std::uint64_t end = std::min(count, begin + per);
        pool.emplace_back([&, begin, end, c] {
            try {
                fn(begin, end, static_cast<std::size_t>(c));
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// Number of chunks parallel_chunks will use.
inline std::size_t chunk_count(std::uint64_t count, unsigned threads) {
    return static_cast<std::size_t>(std::min<std::uint64_t>(std::max(1U, threads), std::max<std::uint64_t>(count, 1)));
}

}  // namespace confla

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace horo {

// Worker count: HORO_THREADS if set, else hardware concurrency (at least 1).
unsigned default_threads();
void set_default_threads(unsigned n);  // 0 restores the environment default

// Runs body(i) for i in [0, count) on a bounded pool.  Work is handed out in
// index order; callers write into per-index slots, so results never depend
// on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, unsigned threads = 0);

template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn, unsigned threads = 0) {
    std::vector<T> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = fn(i); }, threads);
    return out;
}

// Seed for chunk `chunk` of a stream with master seed `seed`.
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk);

}  // namespace horo

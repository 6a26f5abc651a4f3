#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <string_view>
#include <thread>
#include <vector>

#include "delaybs/errors.hpp"

namespace dbs {

enum class Method { Closed, Semi, Mc, Classical, Importance };

std::string_view method_name(Method m) noexcept;

struct PricingResult {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    Method method = Method::Closed;
};

inline constexpr std::uint64_t kDefaultSeed = 20050614;

struct McControls {
    std::size_t n_paths = 100000;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 1;
};

// Welford accumulator; merge() is Chan's pairwise update.
struct RunningStats {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();

    void add(double x) noexcept {
        min = std::min(min, x);
        max = std::max(max, x);
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) noexcept {
        if (o.n == 0) return;
        min = std::min(min, o.min);
        max = std::max(max, o.max);
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n);
        const double nb = static_cast<double>(o.n);
        const double total = na + nb;
        const double d = o.mean - mean;
        mean += d * nb / total;
        m2 += o.m2 + d * d * na * nb / total;
        n += o.n;
    }

    double variance() const noexcept { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double std_error() const noexcept { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
    // sqrt(E[x^2]) over the sample.
    double rms() const noexcept {
        return n > 0 ? std::sqrt(m2 / static_cast<double>(n) + mean * mean) : 0.0;
    }
};

// Paths per reduction chunk. Chunk results are merged in chunk order, so the
// totals do not depend on how many workers ran them.
inline constexpr std::size_t kChunkPaths = 4096;

// Runs fn(stream_id) for stream_id in [0, n_paths) and reduces each of the N
// returned components. fn must be a pure function of its argument.
template <std::size_t N, class PathFn>
std::array<RunningStats, N> reduce_paths(std::size_t n_paths, unsigned workers, PathFn&& fn) {
    using Chunk = std::array<RunningStats, N>;
    if (n_paths == 0) throw ContractError("Monte Carlo needs at least one path");
    const std::size_t n_chunks = (n_paths + kChunkPaths - 1) / kChunkPaths;
    std::vector<Chunk> chunks(n_chunks);

    auto run_chunk = [&](std::size_t c) {
        Chunk acc{};
        const std::size_t end = std::min(n_paths, (c + 1) * kChunkPaths);
        for (std::size_t id = c * kChunkPaths; id < end; ++id) {
            const auto x = fn(static_cast<std::uint64_t>(id));
            for (std::size_t k = 0; k < N; ++k) acc[k].add(x[k]);
        }
        chunks[c] = acc;
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_chunks)));
    if (n_threads <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t c = next++; c < n_chunks; c = next++) {
                    try {
                        run_chunk(c);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = n_chunks;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    Chunk total{};
    for (const auto& c : chunks) {
        for (std::size_t k = 0; k < N; ++k) total[k].merge(c[k]);
    }
    return total;
}

}  // namespace dbs

// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace patprof {

inline constexpr const char* kVersion = "0.1.0";

// Thrown when a randomized procedure exceeds its configured work bound
// (degenerate RNG, duplicate streams, runaway redraw loop).
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// SplitMix64 finalizer; the basic mixing primitive for seeding and for
// counter-based bit generation.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(a + 0x632be59bd9b4e019ULL * mix64(b));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b), c);
}

// uniform in [0,1) from 53 random mantissa bits
inline double u01_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Runs fn(i) for i in [0, count) on `threads` workers, static block split.
// Work items must be independent; callers get thread-count-independent
// results by keying any randomness off the item index.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    int nt = threads;
    if (static_cast<std::int64_t>(nt) > count) nt = static_cast<int>(count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    std::int64_t chunk = (count + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        std::int64_t lo = t * chunk;
        std::int64_t hi = lo + chunk < count ? lo + chunk : count;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace patprof

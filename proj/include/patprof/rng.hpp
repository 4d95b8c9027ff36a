// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "patprof/bias.hpp"
#include "patprof/common.hpp"

namespace patprof {

// xoshiro256** by Blackman & Vigna (public domain reference implementation),
// seeded through SplitMix64.  Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed = 0) {
        std::uint64_t x = seed;
        for (auto& w : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            w = mix64(x);
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double u01() { return u01_from_bits((*this)()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Independent generator for one Monte Carlo trial.  Trials keyed by index are
// reproducible regardless of how they are scheduled over threads.
inline Xoshiro256 trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
    return Xoshiro256(mix64(master_seed, trial_index + 1));
}

// One lazily generated biased bit sequence: bit i is 1 with probability p,
// a pure function of (seed, item, i).  Nothing is stored, so streams can be
// extended indefinitely.
class BitStream {
public:
    BitStream(std::uint64_t seed, std::uint32_t item, const BiasModel& model)
        : seed_(seed), item_(item), p_(model.p) {}

    bool bit(std::uint32_t index) const {
        return u01_from_bits(mix64(seed_, item_, index)) < p_;
    }
    std::uint32_t item() const { return item_; }

private:
    std::uint64_t seed_;
    std::uint32_t item_;
    double p_;
};

inline std::vector<BitStream> make_streams(std::uint64_t seed, std::uint32_t n, const BiasModel& model) {
    std::vector<BitStream> s;
    s.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) s.emplace_back(seed, i, model);
    return s;
}

// Binomial(n, p) conditioned on 1 <= j <= n-1, by rejection.  The acceptance
// probability is 1 - p^n - q^n, so redraws are rare except at tiny n; the
// guard only trips on a broken generator.
template <typename Rng>
int conditioned_binomial(int n, const BiasModel& model, Rng& rng,
                         std::int64_t max_redraws = 1000000) {
    std::binomial_distribution<int> dist(n, model.p);
    for (std::int64_t i = 0; i < max_redraws; ++i) {
        int j = dist(rng);
        if (j >= 1 && j <= n - 1) return j;
    }
    throw resource_limit_error("conditioned_binomial: rejection guard exceeded");
}

}  // namespace patprof

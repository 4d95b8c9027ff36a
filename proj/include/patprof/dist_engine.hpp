// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "patprof/rational.hpp"

namespace patprof {

/// Conditioned split law: w_j = C(n,j) p^j q^{n-j} / (1 - p^n - q^n) for
/// 1 <= j <= n-1.  Index 0 of the returned vector is w_1.
inline std::vector<mpq_class> split_dist(int n, const RationalBias& bias) {
    if (n < 2) throw std::invalid_argument("split_dist: n must be >= 2");
    const mpz_class a = bias.num, b = bias.den, c = bias.qnum();
    mpz_class apow = a, bpow = b, cpow = c;
    for (int m = 1; m < n; ++m) {
        apow *= a;
        bpow *= b;
        cpow *= c;
    }
    mpz_class R = bpow - apow - cpow;  // (1 - p^n - q^n) * b^n
    std::vector<mpq_class> w;
    w.reserve(static_cast<std::size_t>(n - 1));
    mpz_class binom = 1, aj = a, cj = cpow / c;  // a^j, c^{n-j} for j = 1
    for (int j = 1; j <= n - 1; ++j) {
        binom = binom * (n - j + 1) / j;
        mpq_class wj(binom * aj * cj, R);
        wj.canonicalize();
        w.push_back(std::move(wj));
        aj *= a;
        mpz_divexact(cj.get_mpz_t(), cj.get_mpz_t(), c.get_mpz_t());
    }
    return w;
}

inline std::vector<double> split_dist(int n, const BiasModel& model) {
    if (n < 2) throw std::invalid_argument("split_dist: n must be >= 2");
    std::vector<double> w(static_cast<std::size_t>(n - 1));
    double lp = std::log(model.p), lq = std::log(model.q);
    double denom = 1.0 - std::pow(model.p, n) - std::pow(model.q, n);
    double lgn = std::lgamma(n + 1.0);
    for (int j = 1; j <= n - 1; ++j)
        w[static_cast<std::size_t>(j - 1)] =
            std::exp(lgn - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) + j * lp + (n - j) * lq) / denom;
    return w;
}

/// pmf mean and variance; works for any nonnegative-index pmf vector where
/// index i carries probability pmf[i].
inline std::pair<mpq_class, mpq_class> moments(const std::vector<mpq_class>& pmf, int index_offset = 0) {
    mpq_class mean = 0, second = 0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        long v = static_cast<long>(i) + index_offset;
        mean += v * pmf[i];
        second += v * v * pmf[i];
    }
    return {mean, second - mean * mean};
}

inline std::pair<double, double> moments(const std::vector<double>& pmf, int index_offset = 0) {
    double mean = 0, second = 0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        double v = static_cast<double>(i) + index_offset;
        mean += v * pmf[i];
        second += v * v * pmf[i];
    }
    return {mean, second - mean * mean};
}

/// Exact probability tables for one instance size: the full pmf of B_{n,k}
/// per level plus the laws of H_n, F_n, D_n.  fillup_pmf index i carries
/// Pr[F_n = i-1].
struct DistTable {
    int n = 0;
    std::vector<std::vector<mpq_class>> profile_pmf;  // [k][b], k = 0..n-1
    std::vector<mpq_class> height_pmf;
    std::vector<mpq_class> fillup_pmf;
    std::vector<mpq_class> depth_pmf;
};

/// Exact distributions of B_{n,k}, H_n, F_n, D_n for small n by dynamic
/// programming over the conditioned split law.  Everything is mpq-exact;
/// n is capped because the profile pmf convolution blows up combinatorially.
class DistEngine {
public:
    explicit DistEngine(const RationalBias& bias, int n_small = 25)
        : bias_(bias), n_small_(n_small) {}

    int n_small() const { return n_small_; }
    const RationalBias& bias() const { return bias_; }

    /// pmf of B_{n,k}: index b = probability that exactly b elements are
    /// recovered by query k.  B_{1,0} = 1; B_{n,k} = B_{j,k-1} + B'_{n-j,k-1}
    /// with j from the split law and independent branches.
    const std::vector<mpq_class>& profile_pmf(int n, int k) {
        guard(n);
        auto key = std::make_pair(n, k);
        auto it = pmf_memo_.find(key);
        if (it != pmf_memo_.end()) return it->second;

        std::vector<mpq_class> result;
        if (n == 1 && k == 0) {
            result = {mpq_class(0), mpq_class(1)};  // the single element sits at depth 0
        } else if (k <= 0 || k >= n) {
            result.assign(1, mpq_class(1));  // B_{n,k} = 0 surely
        } else {
            result.assign(static_cast<std::size_t>(n) + 1, mpq_class(0));
            auto w = split_dist(n, bias_);
            for (int j = 1; j <= n - 1; ++j) {
                const auto& left = profile_pmf(j, k - 1);
                const auto& right = profile_pmf(n - j, k - 1);
                for (std::size_t x = 0; x < left.size(); ++x) {
                    if (left[x] == 0) continue;
                    for (std::size_t y = 0; y < right.size(); ++y) {
                        if (right[y] == 0) continue;
                        result[x + y] += w[static_cast<std::size_t>(j - 1)] * left[x] * right[y];
                    }
                }
            }
        }
        auto [pos, ok] = pmf_memo_.emplace(key, std::move(result));
        return pos->second;
    }

    /// Pr[H_n <= k].
    mpq_class height_cdf(int n, int k) {
        guard(n);
        if (k < 0) return mpq_class(0);
        if (n == 1) return mpq_class(1);
        if (k >= n - 1) return mpq_class(1);  // H_n <= n-1 surely
        if (k == 0) return mpq_class(0);
        auto key = std::make_pair(n, k);
        auto it = hcdf_memo_.find(key);
        if (it != hcdf_memo_.end()) return it->second;
        mpq_class acc = 0;
        auto w = split_dist(n, bias_);
        for (int j = 1; j <= n - 1; ++j)
            acc += w[static_cast<std::size_t>(j - 1)] * height_cdf(j, k - 1) * height_cdf(n - j, k - 1);
        hcdf_memo_.emplace(key, acc);
        return acc;
    }

    /// Pr[min leaf depth >= k] (fillup F_n = min depth - 1, so
    /// Pr[F_n >= k] = fillup_ccdf(n, k+1)).
    mpq_class fillup_ccdf(int n, int k) {
        guard(n);
        if (k <= 0) return mpq_class(1);
        if (n == 1) return mpq_class(0);
        // min leaf depth >= k forces a full binary tree to depth k, so n >= 2^k
        if (k > floor_log2(n)) return mpq_class(0);
        auto key = std::make_pair(n, k);
        auto it = gccdf_memo_.find(key);
        if (it != gccdf_memo_.end()) return it->second;
        mpq_class acc = 0;
        auto w = split_dist(n, bias_);
        for (int j = 1; j <= n - 1; ++j)
            acc += w[static_cast<std::size_t>(j - 1)] * fillup_ccdf(j, k - 1) * fillup_ccdf(n - j, k - 1);
        gccdf_memo_.emplace(key, acc);
        return acc;
    }

    /// pmf of H_n over k = 0..n-1.
    std::vector<mpq_class> height_pmf(int n) {
        guard(n);
        std::vector<mpq_class> pmf(static_cast<std::size_t>(std::max(n - 1, 1)) + 1, mpq_class(0));
        mpq_class prev = 0;
        for (int k = 0; k <= std::max(n - 1, 0); ++k) {
            mpq_class cur = height_cdf(n, k);
            pmf[static_cast<std::size_t>(k)] = cur - prev;
            prev = cur;
        }
        return pmf;
    }

    /// pmf of F_n; index i carries Pr[F_n = i-1] (support starts at -1 for n=1).
    std::vector<mpq_class> fillup_pmf(int n) {
        guard(n);
        std::vector<mpq_class> pmf(static_cast<std::size_t>(n) + 1, mpq_class(0));
        // Pr[F = f] = Pr[min >= f+1] - Pr[min >= f+2]
        for (int f = -1; f <= n - 1; ++f)
            pmf[static_cast<std::size_t>(f + 1)] = fillup_ccdf(n, f + 1) - fillup_ccdf(n, f + 2);
        return pmf;
    }

    /// pmf of D_n over k = 0..n-1: Pr[D_n = k] = mu_{n,k}/n.
    std::vector<mpq_class> depth_pmf(int n) {
        guard(n);
        std::vector<mpq_class> pmf(static_cast<std::size_t>(std::max(n, 1)), mpq_class(0));
        if (n == 1) {
            pmf[0] = 1;
            return pmf;
        }
        for (int k = 1; k <= n - 1; ++k) {
            auto [mean, var] = moments(profile_pmf(n, k));
            pmf[static_cast<std::size_t>(k)] = mean / n;
        }
        return pmf;
    }

    DistTable dist_table(int n) {
        DistTable t;
        t.n = n;
        for (int k = 0; k < std::max(n, 1); ++k) t.profile_pmf.push_back(profile_pmf(n, k));
        t.height_pmf = height_pmf(n);
        t.fillup_pmf = fillup_pmf(n);
        t.depth_pmf = depth_pmf(n);
        return t;
    }

private:
    void guard(int n) const {
        if (n < 1) throw std::invalid_argument("DistEngine: n must be >= 1");
        if (n > n_small_)
            throw std::invalid_argument("DistEngine: n exceeds the exact-DP cap (combinatorial blowup)");
    }
    static int floor_log2(int n) {
        int k = 0;
        while ((1 << (k + 1)) <= n) ++k;
        return k;
    }

    RationalBias bias_;
    int n_small_;
    std::map<std::pair<int, int>, std::vector<mpq_class>> pmf_memo_;
    std::map<std::pair<int, int>, mpq_class> hcdf_memo_;
    std::map<std::pair<int, int>, mpq_class> gccdf_memo_;
};

}  // namespace patprof

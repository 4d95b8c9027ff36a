// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "patprof/bias.hpp"
#include "patprof/rational.hpp"

namespace patprof {

// mu_{n,k} = E[number of elements recovered by query k] over n items.
// Recurrence, for n >= 2 and k >= 1, with w_{n,j} the binomial split law
// conditioned on a nontrivial split:
//     mu_{n,k} = sum_{j=1}^{n-1} w_{n,j} (mu_{j,k-1} + mu_{n-j,k-1}),
// bases mu_{1,0} = 1, mu_{n,0} = 0 for n >= 2, mu_{n,k} = 0 for k >= n.

/// Exact table.  Row n is stored as integers A_{n,k} over the shared
/// denominator D_n = prod_{m<=n} R_m with R_m = b^m - a^m - c^m (p = a/b,
/// q = c/b), so the DP runs entirely in mpz with no per-step gcds.  D_j
/// divides D_{n-1} for j < n, which makes the row update
///     A_{n,k} = sum_j [C(n,j) a^j c^{n-j} + C(n,n-j) a^{n-j} c^j]
///               * (D_{n-1}/D_j) * A_{j,k-1}
/// a pure integer multiply-accumulate.
class RationalProfileTable {
public:
    RationalProfileTable(const RationalBias& bias, int n_max, int k_max, int threads = 1)
        : bias_(bias), n_max_(n_max), k_max_(k_max) {
        if (n_max < 1 || k_max < 0) throw std::invalid_argument("RationalProfileTable: bad bounds");
        build(threads);
    }

    int n_max() const { return n_max_; }
    int k_max() const { return k_max_; }
    const RationalBias& bias() const { return bias_; }

    /// mu_{n,k} as a canonical rational.
    mpq_class mu(int n, int k) const {
        check_range(n);
        if (k < 0 || k >= n || k > k_max_) return mpq_class(0);
        mpq_class r(raw(n, k), denom_[static_cast<std::size_t>(n)]);
        r.canonicalize();
        return r;
    }

    /// ln mu_{n,k}; -inf when mu = 0.  Usable far below double range.
    double log_mu(int n, int k) const {
        check_range(n);
        if (k < 0 || k >= n || k > k_max_) return -std::numeric_limits<double>::infinity();
        const mpz_class& a = raw(n, k);
        if (a == 0) return -std::numeric_limits<double>::infinity();
        return log_mpz(a) - log_mpz(denom_[static_cast<std::size_t>(n)]);
    }

    /// mu as a double; underflows to 0 outside double range (use log_mu there).
    double mu_double(int n, int k) const { return mu(n, k).get_d(); }

    /// Exact check of sum_k mu_{n,k} = n; requires the row to be complete
    /// (k_max >= n-1).
    bool conservation_holds(int n) const {
        check_range(n);
        if (k_max_ < n - 1) throw std::logic_error("conservation check needs k_max >= n-1");
        mpz_class sum = 0;
        for (const auto& a : rows_[static_cast<std::size_t>(n)]) sum += a;
        return sum == n * denom_[static_cast<std::size_t>(n)];
    }

private:
    void check_range(int n) const {
        if (n < 1 || n > n_max_) throw std::out_of_range("RationalProfileTable: n out of range");
    }

    const mpz_class& raw(int n, int k) const {
        static const mpz_class zero = 0;
        const auto& row = rows_[static_cast<std::size_t>(n)];
        return static_cast<std::size_t>(k) < row.size() ? row[static_cast<std::size_t>(k)] : zero;
    }

    void build(int threads) {
        const mpz_class a = bias_.num, b = bias_.den, c = bias_.qnum();
        const int N = n_max_;
        std::vector<mpz_class> apow(N + 1), cpow(N + 1), bpow(N + 1), R(N + 1);
        apow[0] = cpow[0] = bpow[0] = 1;
        for (int m = 1; m <= N; ++m) {
            apow[m] = apow[m - 1] * a;
            cpow[m] = cpow[m - 1] * c;
            bpow[m] = bpow[m - 1] * b;
        }
        denom_.assign(N + 1, mpz_class(1));
        for (int m = 2; m <= N; ++m) {
            R[m] = bpow[m] - apow[m] - cpow[m];
            denom_[m] = denom_[m - 1] * R[m];
        }

        rows_.resize(N + 1);
        rows_[1] = {mpz_class(1)};  // mu_{1,0} = 1 over D_1 = 1
        std::vector<mpz_class> binom(N + 1);
        for (int n = 2; n <= N; ++n) {
            const int cols = std::min(n - 1, k_max_) + 1;
            rows_[n].assign(cols, mpz_class(0));
            binom[0] = 1;
            for (int j = 1; j <= n; ++j) binom[j] = binom[j - 1] * (n - j + 1) / j;

            // The j-sum is blocked so the giant quotient D_{n-1}/D_j splits
            // into a per-block outer factor D_{n-1}/D_hi and a small inner
            // factor D_hi/D_j; one big multiply per block per column instead
            // of one per j.  Block width ~ sqrt(n) balances the two sides.
            const int width = std::max(4, static_cast<int>(std::lround(0.5 * std::sqrt(n))));
            const int nblocks = (n - 2 + width) / width;
            std::vector<std::vector<mpz_class>> inner(static_cast<std::size_t>(nblocks));
            std::vector<mpz_class> outer(static_cast<std::size_t>(nblocks));
            {
                mpz_class run = 1;  // D_{n-1}/D_hi for the current block
                for (int t = nblocks - 1; t >= 0; --t) {
                    const int lo = t * width + 1, hi = std::min((t + 1) * width, n - 1);
                    outer[static_cast<std::size_t>(t)] = run;
                    auto& blk = inner[static_cast<std::size_t>(t)];
                    blk.resize(static_cast<std::size_t>(hi - lo + 1));
                    mpz_class quot = 1;  // D_hi/D_j, built downward
                    for (int j = hi; j >= lo; --j) {
                        blk[static_cast<std::size_t>(j - lo)] =
                            (binom[j] * apow[j] * cpow[n - j] + binom[j] * apow[n - j] * cpow[j]) * quot;
                        quot *= R[j];  // now D_hi/D_{j-1}
                    }
                    run *= quot;  // D_{n-1}/D_{lo-1}
                }
            }
            auto fill_column = [&](int k) {
                mpz_class& acc = rows_[n][static_cast<std::size_t>(k)];
                mpz_class block_sum;
                for (int t = 0; t < nblocks; ++t) {
                    const int lo = t * width + 1, hi = std::min((t + 1) * width, n - 1);
                    if (hi < k) continue;  // mu_{j,k-1} = 0 for j <= k-1
                    block_sum = 0;
                    for (int j = std::max(lo, std::max(k, 1)); j <= hi; ++j) {
                        const auto& row_j = rows_[j];
                        if (static_cast<std::size_t>(k - 1) < row_j.size())
                            mpz_addmul(block_sum.get_mpz_t(),
                                       inner[static_cast<std::size_t>(t)][static_cast<std::size_t>(j - lo)].get_mpz_t(),
                                       row_j[static_cast<std::size_t>(k - 1)].get_mpz_t());
                    }
                    mpz_addmul(acc.get_mpz_t(), outer[static_cast<std::size_t>(t)].get_mpz_t(),
                               block_sum.get_mpz_t());
                }
            };
            if (threads > 1 && n > 48) {
                std::thread other([&] {
                    for (int k = 1; k < cols; k += 2) fill_column(k);
                });
                for (int k = 2; k < cols; k += 2) fill_column(k);
                other.join();
            } else {
                for (int k = 1; k < cols; ++k) fill_column(k);
            }
        }
    }

    RationalBias bias_;
    int n_max_, k_max_;
    std::vector<std::vector<mpz_class>> rows_;  // rows_[n][k] = mu_{n,k} * D_n
    std::vector<mpz_class> denom_;              // D_n
};

struct FloatTableOptions {
    int k_max = -1;          // default: min(n_max - 1, ceil(4 ln n_max))
    double window_c = 12.0;  // binomial window half-width in sigmas; 0 = full range
    double drift_report_threshold = 1e-8;
};

inline int default_k_max(std::int64_t n_max) {
    return static_cast<int>(std::min<double>(static_cast<double>(n_max - 1),
                                             std::ceil(4.0 * std::log(std::max<std::int64_t>(n_max, 2)))));
}

/// Double-precision table for large n.  The j-sum in the recurrence is
/// restricted to the binomial window np +- c sqrt(npq); outside it the weights
/// are below e^{-c^2/2} and contribute nothing at double precision.  All
/// recurrence terms are nonnegative, so relative error stays ~k*eps.
class FloatProfileTable {
public:
    FloatProfileTable(const BiasModel& model, std::int64_t n_max, FloatTableOptions opt = {})
        : model_(model), n_max_(n_max),
          k_max_(opt.k_max >= 0 ? opt.k_max : default_k_max(n_max)) {
        if (n_max < 1) throw std::invalid_argument("FloatProfileTable: n_max must be >= 1");
        build(opt);
    }

    std::int64_t n_max() const { return n_max_; }
    int k_max() const { return k_max_; }
    const BiasModel& model() const { return model_; }

    double mu(std::int64_t n, int k) const {
        if (n < 1 || n > n_max_) throw std::out_of_range("FloatProfileTable: n out of range");
        if (k < 0 || k >= n || k > k_max_) return 0.0;
        return mu_[static_cast<std::size_t>(n) * stride() + static_cast<std::size_t>(k)];
    }

    /// Largest relative |row sum - n|/n over rows whose full k-range fits the
    /// table (k_max >= n-1); rows truncated in k cannot be checked.
    double max_conservation_drift() const { return max_drift_; }
    bool conservation_ok() const { return max_drift_ <= drift_threshold_; }

private:
    std::size_t stride() const { return static_cast<std::size_t>(k_max_) + 1; }

    void build(const FloatTableOptions& opt) {
        const double p = model_.p, q = model_.q;
        drift_threshold_ = opt.drift_report_threshold;
        mu_.assign((static_cast<std::size_t>(n_max_) + 1) * stride(), 0.0);
        mu_[1 * stride() + 0] = 1.0;

        std::vector<double> w;  // conditioned split weights for the current n
        for (std::int64_t n = 2; n <= n_max_; ++n) {
            // window [jlo, jhi] around the mode
            std::int64_t jlo = 1, jhi = n - 1;
            if (opt.window_c > 0) {
                double center = static_cast<double>(n) * p;
                double half = opt.window_c * std::sqrt(static_cast<double>(n) * p * q);
                jlo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(center - half)));
                jhi = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(std::ceil(center + half)));
            }
            // binomial pmf over the window by ratio recursion from the mode
            std::int64_t mode = std::clamp<std::int64_t>(
                static_cast<std::int64_t>((static_cast<double>(n) + 1) * p), jlo, jhi);
            w.assign(static_cast<std::size_t>(jhi - jlo + 1), 0.0);
            double logmode = std::lgamma(static_cast<double>(n) + 1) -
                             std::lgamma(static_cast<double>(mode) + 1) -
                             std::lgamma(static_cast<double>(n - mode) + 1) +
                             static_cast<double>(mode) * std::log(p) +
                             static_cast<double>(n - mode) * std::log(q);
            double wmode = std::exp(logmode);
            w[static_cast<std::size_t>(mode - jlo)] = wmode;
            double cur = wmode;
            for (std::int64_t j = mode; j < jhi; ++j) {
                cur *= static_cast<double>(n - j) / static_cast<double>(j + 1) * (p / q);
                w[static_cast<std::size_t>(j + 1 - jlo)] = cur;
            }
            cur = wmode;
            for (std::int64_t j = mode; j > jlo; --j) {
                cur *= static_cast<double>(j) / static_cast<double>(n - j + 1) * (q / p);
                w[static_cast<std::size_t>(j - 1 - jlo)] = cur;
            }
            double pn = std::pow(p, static_cast<double>(n)), qn = std::pow(q, static_cast<double>(n));
            double inv_accept = 1.0 / (1.0 - pn - qn);

            const int cols = static_cast<int>(std::min<std::int64_t>(n - 1, k_max_)) + 1;
            double* row_n = &mu_[static_cast<std::size_t>(n) * stride()];
            for (int k = 1; k < cols; ++k) {
                double acc = 0.0;
                const std::size_t km1 = static_cast<std::size_t>(k - 1);
                for (std::int64_t j = jlo; j <= jhi; ++j) {
                    double f = mu_[static_cast<std::size_t>(j) * stride() + km1] +
                               mu_[static_cast<std::size_t>(n - j) * stride() + km1];
                    acc += w[static_cast<std::size_t>(j - jlo)] * f;
                }
                row_n[k] = acc * inv_accept;
            }
            if (k_max_ >= n - 1) {
                double sum = 0.0;
                for (int k = 0; k < cols; ++k) sum += row_n[k];
                double drift = std::abs(sum - static_cast<double>(n)) / static_cast<double>(n);
                if (drift > max_drift_) max_drift_ = drift;
            }
        }
    }

    BiasModel model_;
    std::int64_t n_max_;
    int k_max_;
    std::vector<double> mu_;
    double max_drift_ = 0.0;
    double drift_threshold_ = 1e-8;
};

/// Depth pmf for large n off the float table: Pr[D_n = k] = mu_{n,k}/n.
inline std::vector<double> depth_pmf(const FloatProfileTable& table, std::int64_t n) {
    std::vector<double> pmf(static_cast<std::size_t>(table.k_max()) + 1, 0.0);
    for (int k = 0; k <= table.k_max(); ++k)
        pmf[static_cast<std::size_t>(k)] = table.mu(n, k) / static_cast<double>(n);
    return pmf;
}

/// CSV export, columns n,k,mu_num,mu_den (canonical fractions).
inline void export_csv(const RationalProfileTable& table, std::ostream& out) {
    out << "n,k,mu_num,mu_den\n";
    for (int n = 1; n <= table.n_max(); ++n)
        for (int k = 0; k <= std::min(n - 1, table.k_max()); ++k) {
            mpq_class v = table.mu(n, k);
            out << n << ',' << k << ',' << v.get_num().get_str() << ',' << v.get_den().get_str()
                << '\n';
        }
}

/// CSV export, columns n,k,mu with 17-significant-digit floats.
inline void export_csv(const FloatProfileTable& table, std::ostream& out) {
    char buf[40];
    out << "n,k,mu\n";
    for (std::int64_t n = 1; n <= table.n_max(); ++n)
        for (int k = 0; k <= std::min<std::int64_t>(n - 1, table.k_max()); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", table.mu(n, k));
            out << n << ',' << k << ',' << buf << '\n';
        }
}

}  // namespace patprof

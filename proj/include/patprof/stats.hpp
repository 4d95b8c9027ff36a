// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "patprof/special.hpp"

namespace patprof {

struct GofResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Pearson goodness-of-fit test of observed counts against expected
/// probabilities.  Bins with expected count below `min_expected` are pooled
/// into their neighbor so the chi-square approximation stays valid.
inline GofResult chi_square_gof(const std::vector<std::int64_t>& observed,
                                const std::vector<double>& probs,
                                double min_expected = 5.0) {
    if (observed.size() != probs.size())
        throw std::invalid_argument("chi_square_gof: size mismatch");
    std::int64_t total = 0;
    for (auto c : observed) total += c;
    if (total == 0) throw std::invalid_argument("chi_square_gof: empty sample");

    // pool left to right; a trailing under-filled bin merges backwards
    std::vector<double> exp_pooled;
    std::vector<std::int64_t> obs_pooled;
    double e_acc = 0.0;
    std::int64_t o_acc = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        e_acc += probs[i] * static_cast<double>(total);
        o_acc += observed[i];
        if (e_acc >= min_expected) {
            exp_pooled.push_back(e_acc);
            obs_pooled.push_back(o_acc);
            e_acc = 0.0;
            o_acc = 0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0) {
        if (exp_pooled.empty()) {
            exp_pooled.push_back(e_acc);
            obs_pooled.push_back(o_acc);
        } else {
            exp_pooled.back() += e_acc;
            obs_pooled.back() += o_acc;
        }
    }

    GofResult r;
    r.df = static_cast<int>(exp_pooled.size()) - 1;
    if (r.df < 1) {
        // everything pooled into one bin: no test possible, report pass
        r.df = 0;
        r.p_value = 1.0;
        return r;
    }
    for (std::size_t i = 0; i < exp_pooled.size(); ++i) {
        double d = static_cast<double>(obs_pooled[i]) - exp_pooled[i];
        r.statistic += d * d / exp_pooled[i];
    }
    r.p_value = chi2_sf(r.statistic, r.df);
    return r;
}

/// Two-sample chi-square homogeneity test over integer-keyed histograms.
/// Cells with combined count below `min_combined` are pooled.
inline GofResult chi_square_two_sample(const std::map<int, std::int64_t>& h1,
                                       const std::map<int, std::int64_t>& h2,
                                       std::int64_t min_combined = 10) {
    double n1 = 0, n2 = 0;
    std::map<int, std::pair<std::int64_t, std::int64_t>> cells;
    for (auto [k, c] : h1) {
        cells[k].first += c;
        n1 += static_cast<double>(c);
    }
    for (auto [k, c] : h2) {
        cells[k].second += c;
        n2 += static_cast<double>(c);
    }
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("chi_square_two_sample: empty sample");

    std::vector<std::pair<double, double>> pooled;
    double a_acc = 0, b_acc = 0;
    for (auto& [k, ab] : cells) {
        a_acc += static_cast<double>(ab.first);
        b_acc += static_cast<double>(ab.second);
        if (a_acc + b_acc >= static_cast<double>(min_combined)) {
            pooled.emplace_back(a_acc, b_acc);
            a_acc = b_acc = 0;
        }
    }
    if ((a_acc > 0 || b_acc > 0) && !pooled.empty()) {
        pooled.back().first += a_acc;
        pooled.back().second += b_acc;
    }

    GofResult r;
    r.df = static_cast<int>(pooled.size()) - 1;
    if (r.df < 1) {
        r.df = 0;
        r.p_value = 1.0;
        return r;
    }
    const double s1 = std::sqrt(n2 / n1), s2 = std::sqrt(n1 / n2);
    for (auto& [a, b] : pooled) {
        double d = s1 * a - s2 * b;
        r.statistic += d * d / (a + b);
    }
    r.p_value = chi2_sf(r.statistic, r.df);
    return r;
}

struct KsResult {
    double d = 0.0;       // sup |F_hat - F_fit| over lattice cutpoints
    double lambda = 0.0;  // finite-sample scaled statistic
    double p_value = 1.0;
    double mean = 0.0;
    double sd = 0.0;
};

/// Kolmogorov-Smirnov normality test for an integer-valued (lattice) sample.
/// The empirical CDF is compared with the fitted normal at the half-integer
/// cutpoints between atoms, which is the natural discrete version of the
/// statistic; mean and sd are estimated from the sample.
inline KsResult ks_normality_lattice(const std::vector<int>& sample) {
    if (sample.size() < 10) throw std::invalid_argument("ks_normality_lattice: sample too small");
    const double n = static_cast<double>(sample.size());
    std::map<int, std::int64_t> hist;
    double sum = 0.0;
    for (int v : sample) {
        ++hist[v];
        sum += static_cast<double>(v);
    }
    KsResult r;
    r.mean = sum / n;
    double ss = 0.0;
    for (int v : sample) {
        double d = static_cast<double>(v) - r.mean;
        ss += d * d;
    }
    r.sd = std::sqrt(ss / (n - 1.0));

    double cum = 0.0;
    for (auto [v, c] : hist) {
        cum += static_cast<double>(c);
        double z = (static_cast<double>(v) + 0.5 - r.mean) / r.sd;
        double fit = 0.5 * std::erfc(-z / std::sqrt(2.0));
        r.d = std::max(r.d, std::abs(cum / n - fit));
    }
    double sqn = std::sqrt(n);
    r.lambda = (sqn + 0.12 + 0.11 / sqn) * r.d;
    r.p_value = kolmogorov_sf(r.lambda);
    return r;
}

struct SampleSummary {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double stderr_mean = 0.0;
    std::int64_t count = 0;
};

template <typename T>
SampleSummary summarize(const std::vector<T>& xs) {
    SampleSummary s;
    s.count = static_cast<std::int64_t>(xs.size());
    if (s.count == 0) return s;
    double sum = 0.0;
    for (auto x : xs) sum += static_cast<double>(x);
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (auto x : xs) {
            double d = static_cast<double>(x) - s.mean;
            ss += d * d;
        }
        s.variance = ss / static_cast<double>(s.count - 1);
        s.stderr_mean = std::sqrt(s.variance / static_cast<double>(s.count));
    }
    return s;
}

}  // namespace patprof

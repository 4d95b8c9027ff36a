// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "patprof/bias.hpp"
#include "patprof/kernel.hpp"
#include "patprof/oscillation.hpp"

namespace patprof {

/// Leading term of the central-range expected profile:
///   mu_{n,k} ~ H(rho(alpha), log_{p/q}(p^k n)) n^{beta(alpha)} /
///              sqrt(2 pi kappa*(rho) alpha ln n),   alpha = k / ln n.
/// Throws std::domain_error outside the open central interval (use
/// knessl_estimate near the right boundary instead).
inline double expected_profile_asym(std::int64_t n, int k, const BiasModel& model,
                                    const OscillationSeries& ctx) {
    if (n < 2 || k < 1) throw std::domain_error("expected_profile_asym: need n >= 2, k >= 1");
    const double ln_n = std::log(static_cast<double>(n));
    const double alpha = static_cast<double>(k) / ln_n;
    SaddleParams sp = rho_beta(alpha, model);  // throws outside the central interval
    const double x = (ln_n - static_cast<double>(k) * model.log_inv_p) / model.log_p_over_q;
    FluctEval fluct = ctx.h_fluct(sp.rho, x);
    return fluct.value * std::exp(sp.beta * ln_n) /
           std::sqrt(2.0 * M_PI * sp.kappa * alpha * ln_n);
}

/// ln of the boundary estimate for mu_{n,k} with k close to n (p >= q):
///   (n-k)^{3/2 + ln q/ln p} n!/(n-k)! p^{k^2/2 + k/2} q^k
///   exp(-ln^2(n-k) / (2 ln(1/p))),
/// Theta(1) factor set to 1.  Log-space; the value itself underflows double
/// range already for moderate n.
inline double log_knessl_estimate(std::int64_t n, std::int64_t k, const BiasModel& model) {
    if (model.p < model.q) throw std::domain_error("knessl_estimate: needs p >= q");
    if (k < 1 || k >= n) throw std::domain_error("knessl_estimate: needs 1 <= k < n");
    const double nk = static_cast<double>(n - k);
    const double kd = static_cast<double>(k);
    const double lnp = -model.log_inv_p, lnq = -model.log_inv_q;
    double result = (1.5 + lnq / lnp) * std::log(nk);
    result += std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(nk + 1.0);
    result += (kd * kd / 2.0 + kd / 2.0) * lnp + kd * lnq;
    result -= std::log(nk) * std::log(nk) / (2.0 * model.log_inv_p);
    return result;
}

inline double knessl_estimate(std::int64_t n, std::int64_t k, const BiasModel& model) {
    return std::exp(log_knessl_estimate(n, k, model));
}

/// Two-term height expansion (n >= 16 so ln ln n > 0):
///   p > q: log_{1/p} n + (1/2) log_{p/q} ln n
///   p = q: log_2 n + sqrt(2 log_2 n)
inline double predict_height(std::int64_t n, const BiasModel& model) {
    if (n < 16) throw std::invalid_argument("predict_height: needs n >= 16");
    const double ln_n = std::log(static_cast<double>(n));
    if (model.symmetric()) {
        double log2n = ln_n / M_LN2;
        return log2n + std::sqrt(2.0 * log2n);
    }
    return ln_n / model.log_inv_p + 0.5 * std::log(ln_n) / model.log_p_over_q;
}

/// Two-term fillup expansion:
///   p > q: log_{1/q} n - log_{1/q} ln ln n
///   p = q: log_2 n - log_2 ln n
inline double predict_fillup(std::int64_t n, const BiasModel& model) {
    if (n < 16) throw std::invalid_argument("predict_fillup: needs n >= 16");
    const double ln_n = std::log(static_cast<double>(n));
    if (model.symmetric()) return (ln_n - std::log(ln_n)) / M_LN2;
    return (ln_n - std::log(std::log(ln_n))) / model.log_inv_q;
}

/// Depth mean and variance: E[D_n] ~ ln n / h, Var[D_n] ~ c ln n with
/// c = kappa*(-1)/h^3.
inline std::pair<double, double> predict_depth(std::int64_t n, const BiasModel& model) {
    const double ln_n = std::log(static_cast<double>(n));
    KernelFuncs kf(model);
    const double c = kf.d2lambda(-1.0) / (model.h * model.h * model.h);
    return {ln_n / model.h, c * ln_n};
}

/// Local-limit form of the depth pmf (p > q):
///   Pr[D_n = k] ~ H(-1, log_{p/q}(p^k n)) e^{-x^2/2} / sqrt(2 pi C ln n)
/// with x solved from k = (1/h)(ln n + x sqrt(kappa*(-1) ln n / h)) and
/// C = kappa*(-1)/h, which makes the display coincide with the central-range
/// profile formula at alpha = 1/h and normalizes the pmf.  (The variance
/// constant of D_n stays kappa*(-1)/h^3.)
inline double depth_llt_pmf(std::int64_t n, int k, const BiasModel& model,
                            const OscillationSeries& ctx) {
    if (model.symmetric()) throw std::invalid_argument("depth_llt_pmf: unsupported for p = q");
    const double ln_n = std::log(static_cast<double>(n));
    KernelFuncs kf(model);
    const double kappa1 = kf.d2lambda(-1.0);
    const double h = model.h;
    const double C = kappa1 / h;
    const double x_dev = (static_cast<double>(k) * h - ln_n) / std::sqrt(kappa1 * ln_n / h);
    const double x_osc = (ln_n - static_cast<double>(k) * model.log_inv_p) / model.log_p_over_q;
    FluctEval fluct = ctx.h_fluct(-1.0, x_osc);
    return fluct.value * std::exp(-x_dev * x_dev / 2.0) / std::sqrt(2.0 * M_PI * C * ln_n);
}

}  // namespace patprof

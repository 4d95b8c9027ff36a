// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "patprof/bias.hpp"

namespace patprof {

/// The kernel T(s) = p^{-s} + q^{-s} and its log-derivatives, closed forms.
/// Lambda = ln T drives every saddle-point quantity: Lambda'(rho) inverts the
/// saddle equation, Lambda'' is the Gaussian curvature kappa*.
class KernelFuncs {
public:
    explicit KernelFuncs(const BiasModel& model) : m_(model) {}

    const BiasModel& model() const { return m_; }

    std::complex<double> T(std::complex<double> s) const {
        return std::exp(s * m_.log_inv_p) + std::exp(s * m_.log_inv_q);
    }
    double T(double s) const { return std::exp(s * m_.log_inv_p) + std::exp(s * m_.log_inv_q); }

    // d/ds p^{-s} = ln(1/p) p^{-s}
    double dT(double s) const {
        return m_.log_inv_p * std::exp(s * m_.log_inv_p) + m_.log_inv_q * std::exp(s * m_.log_inv_q);
    }
    double d2T(double s) const {
        return m_.log_inv_p * m_.log_inv_p * std::exp(s * m_.log_inv_p) +
               m_.log_inv_q * m_.log_inv_q * std::exp(s * m_.log_inv_q);
    }

    double lambda(double s) const { return std::log(T(s)); }
    double dlambda(double s) const { return dT(s) / T(s); }
    double d2lambda(double s) const {
        double t = T(s), d = dT(s);
        return d2T(s) / t - (d / t) * (d / t);
    }

    /// Imaginary spacing of the regularly spaced saddle points:
    /// t_j = 2 pi j / ln(p/q).
    double t_j(int j) const {
        if (m_.symmetric()) throw std::invalid_argument("t_j undefined at p = q");
        return 2.0 * M_PI * static_cast<double>(j) / m_.log_p_over_q;
    }

private:
    BiasModel m_;
};

/// Saddle-point data at alpha = k/ln n.
struct SaddleParams {
    double alpha = 0;
    double rho = 0;    // real saddle point
    double beta = 0;   // polynomial growth exponent, beta <= 1
    double kappa = 0;  // Lambda''(rho)
};

/// Closed forms: rho(alpha) from the saddle equation alpha Lambda'(rho) = 1,
/// beta(alpha) = alpha ln T(rho) - rho.  alpha must lie strictly inside
/// (1/ln(1/q), 1/ln(1/p)); p = q is unsupported (rho degenerates).
inline SaddleParams rho_beta(double alpha, const BiasModel& model) {
    if (model.symmetric()) throw std::invalid_argument("rho_beta: unsupported for p = q");
    const double lo = 1.0 / model.log_inv_q, hi = 1.0 / model.log_inv_p;
    if (!(alpha > lo && alpha < hi))
        throw std::domain_error("rho_beta: alpha outside (1/ln(1/q), 1/ln(1/p))");
    KernelFuncs kf(model);
    SaddleParams sp;
    sp.alpha = alpha;
    sp.rho = -std::log((alpha * model.log_inv_q - 1.0) / (1.0 - alpha * model.log_inv_p)) /
             model.log_p_over_q;
    sp.beta = alpha * kf.lambda(sp.rho) - sp.rho;
    sp.kappa = kf.d2lambda(sp.rho);
    return sp;
}

}  // namespace patprof

// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "patprof/bias.hpp"
#include "patprof/kernel.hpp"
#include "patprof/profile_table.hpp"
#include "patprof/special.hpp"

namespace patprof {

struct OscillationOptions {
    int j_max = 40;      // truncation of the T(s)^{-j} shells
    int n_max = 400;     // truncation of the inner n sum
    int fourier_j = 8;   // harmonics on each side of j = 0
    double tol = 1e-8;   // relative tail tolerance
};

struct SeriesEval {
    std::complex<double> value{0.0, 0.0};
    double j_tail = 0.0;  // relative magnitude of the last j shell
    double n_tail = 0.0;  // relative magnitude of the last n term (worst shell)
    bool converged = true;
};

struct FluctEval {
    double value = 0.0;
    double imag_residual = 0.0;  // |Im| left after pairing the +-j harmonics
    bool converged = true;
};

/// Truncated evaluation context for the entire function A(s) and the periodic
/// fluctuation H(rho, x).  Holds the mu_{n,k} table the series needs
/// (n <= n_max, k <= j_max) and the Fourier grid t_j = 2 pi j / ln(p/q).
class OscillationSeries {
public:
    OscillationSeries(const BiasModel& model, OscillationOptions opt = {})
        : model_(require_asymmetric(model)), kernel_(model), opt_(opt),
          mu_(model, opt.n_max, make_float_options(opt.j_max)) {
        t_minus_n_.resize(static_cast<std::size_t>(opt_.n_max) + 1);
        for (int n = 1; n <= opt_.n_max; ++n)
            t_minus_n_[static_cast<std::size_t>(n)] =
                std::pow(model_.p, n) + std::pow(model_.q, n);
        run_convergence_probe();
    }

    const BiasModel& model() const { return model_; }
    const KernelFuncs& kernel() const { return kernel_; }
    const OscillationOptions& options() const { return opt_; }

    /// Max relative change of A at the probe points when both truncation
    /// orders are doubled (computed once at construction).
    double truncation_probe_delta() const { return probe_delta_; }
    bool truncation_converged() const { return probe_delta_ <= opt_.tol; }

    /// A(s) = sum_j T(s)^{-j} sum_{n>=max(j,1)} T(-n) (mu_{n,j} - mu_{n,j-1})
    ///        phi_n(s)/n!,  phi_n(s) = prod_{i=1}^{n-1} (s+i).
    /// phi_n(s)/n! is accumulated by the stable multiplicative recurrence
    /// r_{n+1} = r_n (s+n)/(n+1).
    SeriesEval a_series(std::complex<double> s) const { return a_series_impl(s, opt_.j_max, opt_.n_max); }

    /// H(rho, x) = sum_{j in Z} A(rho + i t_j) Gamma(rho + 1 + i t_j)
    ///             e^{-2 pi i j x}; period 1 in x.  At negative-integer rho
    /// the j = 0 term is the removable-singularity limit A'(rho) times the
    /// Gamma residue.
    FluctEval h_fluct(double rho, double x) const {
        FluctEval out;
        std::complex<double> total = j0_term(rho);
        double prev_mag = std::abs(total);
        bool decreasing = true;
        double last_mag = 0.0;
        for (int j = 1; j <= opt_.fourier_j; ++j) {
            double tj = kernel_.t_j(j);
            std::complex<double> sp{rho, tj}, sm{rho, -tj};
            std::complex<double> phase_p = std::exp(std::complex<double>(0.0, -2.0 * M_PI * j * x));
            std::complex<double> phase_m = std::exp(std::complex<double>(0.0, 2.0 * M_PI * j * x));
            // both sides evaluated independently; pairing must cancel Im
            std::complex<double> term = a_series_impl(sp, opt_.j_max, opt_.n_max).value *
                                            cgamma(sp + 1.0) * phase_p +
                                        a_series_impl(sm, opt_.j_max, opt_.n_max).value *
                                            cgamma(sm + 1.0) * phase_m;
            total += term;
            last_mag = std::abs(term);
            if (j > 1 && last_mag > prev_mag) decreasing = false;
            prev_mag = last_mag;
        }
        out.value = total.real();
        out.imag_residual = std::abs(total.imag());
        out.converged = opt_.fourier_j == 0 ||
                        (decreasing || last_mag <= opt_.tol * std::max(1.0, std::abs(total)));
        return out;
    }

private:
    static const BiasModel& require_asymmetric(const BiasModel& model) {
        if (model.symmetric())
            throw std::invalid_argument("OscillationSeries: requires p != q (t_j undefined)");
        return model;
    }

    static FloatTableOptions make_float_options(int j_max) {
        FloatTableOptions fo;
        fo.k_max = j_max;
        return fo;
    }

    SeriesEval a_series_impl(std::complex<double> s, int j_max, int n_max) const {
        SeriesEval out;
        const std::complex<double> Ts = kernel_.T(s);
        const std::complex<double> inv_T = 1.0 / Ts;
        std::complex<double> shell_weight{1.0, 0.0};  // T(s)^{-j}
        std::complex<double> total{0.0, 0.0};
        double worst_n_tail = 0.0, last_shell = 0.0;
        for (int j = 0; j <= j_max; ++j) {
            std::complex<double> inner{0.0, 0.0};
            std::complex<double> r{1.0, 0.0};  // phi_n(s)/n!, n = 1
            double tail_term = 0.0;            // magnitude of the n = n_max term
            for (int n = 1; n <= n_max; ++n) {
                if (n >= 2) r *= (s + static_cast<double>(n - 1)) / static_cast<double>(n);
                double dmu = mu_value(n, j) - mu_value(n, j - 1);
                if (dmu != 0.0) {
                    std::complex<double> term = t_minus_n_[static_cast<std::size_t>(n)] * dmu * r;
                    inner += term;
                    if (n == n_max) tail_term = std::abs(term);
                }
            }
            std::complex<double> shell = shell_weight * inner;
            total += shell;
            last_shell = std::abs(shell);
            worst_n_tail = std::max(worst_n_tail, std::abs(shell_weight) * tail_term);
            shell_weight *= inv_T;
        }
        out.value = total;
        double scale = std::max(std::abs(total), 1e-300);
        out.j_tail = last_shell / scale;
        out.n_tail = worst_n_tail / scale;
        // tails are relative to |A|; near zeros of A compare against 1 instead
        double abs_ref = std::max(std::abs(total), 1.0);
        out.converged = last_shell / abs_ref <= opt_.tol && worst_n_tail / abs_ref <= opt_.tol;
        return out;
    }

    double mu_value(int n, int k) const {
        if (k < 0 || k >= n || k > mu_.k_max()) return 0.0;
        return mu_.mu(n, k);
    }

    std::complex<double> j0_term(double rho) const {
        double nearest = std::round(rho);
        if (rho <= -0.5 && std::abs(rho - nearest) < 1e-9) {
            // removable singularity: zero of A cancels the Gamma pole
            int m = static_cast<int>(-nearest);
            double residue = (m % 2 == 1 ? 1.0 : -1.0);  // (-1)^{m-1}
            for (int i = 2; i <= m - 1; ++i) residue /= static_cast<double>(i);
            const double step = 1e-4;
            std::complex<double> da =
                (a_series_impl({rho + step, 0.0}, opt_.j_max, opt_.n_max).value -
                 a_series_impl({rho - step, 0.0}, opt_.j_max, opt_.n_max).value) /
                (2.0 * step);
            return da * residue;
        }
        return a_series_impl({rho, 0.0}, opt_.j_max, opt_.n_max).value *
               cgamma(std::complex<double>(rho + 1.0, 0.0));
    }

    void run_convergence_probe() {
        OscillationOptions doubled = opt_;
        doubled.j_max *= 2;
        doubled.n_max *= 2;
        FloatProfileTable mu2(model_, doubled.n_max, make_float_options(doubled.j_max));
        std::vector<double> tmn(static_cast<std::size_t>(doubled.n_max) + 1);
        for (int n = 1; n <= doubled.n_max; ++n)
            tmn[static_cast<std::size_t>(n)] = std::pow(model_.p, n) + std::pow(model_.q, n);

        auto eval_doubled = [&](std::complex<double> s) {
            std::complex<double> inv_T = 1.0 / kernel_.T(s);
            std::complex<double> shell_weight{1.0, 0.0}, total{0.0, 0.0};
            for (int j = 0; j <= doubled.j_max; ++j) {
                std::complex<double> inner{0.0, 0.0}, r{1.0, 0.0};
                for (int n = 1; n <= doubled.n_max; ++n) {
                    if (n >= 2) r *= (s + static_cast<double>(n - 1)) / static_cast<double>(n);
                    double hi = (j < n && j <= mu2.k_max()) ? mu2.mu(n, j) : 0.0;
                    double lo = (j - 1 >= 0 && j - 1 < n && j - 1 <= mu2.k_max()) ? mu2.mu(n, j - 1) : 0.0;
                    if (hi != lo) inner += tmn[static_cast<std::size_t>(n)] * (hi - lo) * r;
                }
                total += shell_weight * inner;
                shell_weight *= inv_T;
            }
            return total;
        };

        probe_delta_ = 0.0;
        const std::complex<double> probes[] = {{0.0, 0.0}, {-0.5, 0.0}, {0.5, kernel_.t_j(1)}};
        for (auto s : probes) {
            std::complex<double> base = a_series_impl(s, opt_.j_max, opt_.n_max).value;
            std::complex<double> fine = eval_doubled(s);
            double denom = std::max({std::abs(base), std::abs(fine), 1e-30});
            probe_delta_ = std::max(probe_delta_, std::abs(base - fine) / denom);
        }
    }

    BiasModel model_;
    KernelFuncs kernel_;
    OscillationOptions opt_;
    FloatProfileTable mu_;
    std::vector<double> t_minus_n_;
    double probe_delta_ = 0.0;
};

}  // namespace patprof

// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "patprof/bias.hpp"

namespace patprof {

/// Exact source bias p = num/den for the rational backend.  Constructed from
/// a decimal string so e.g. "0.7" means exactly 7/10 (the double 0.7 does
/// not).
struct RationalBias {
    mpz_class num;  // p numerator
    mpz_class den;  // shared denominator, q = (den - num)/den

    // any p in (0,1) is accepted so the p <-> q symmetry of the exact tables
    // can be exercised; the simulation-side BiasModel enforces p >= 1/2
    RationalBias(mpz_class num_, mpz_class den_) : num(std::move(num_)), den(std::move(den_)) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        num /= g;
        den /= g;
        if (den <= 0 || num <= 0 || num >= den)
            throw std::invalid_argument("RationalBias: need 0 < p < 1");
    }

    static RationalBias from_decimal(const std::string& text) {
        auto dot = text.find('.');
        std::string digits = text;
        std::size_t frac_len = 0;
        if (dot != std::string::npos) {
            frac_len = text.size() - dot - 1;
            digits = text.substr(0, dot) + text.substr(dot + 1);
        }
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("RationalBias: malformed decimal '" + text + "'");
        mpz_class n(digits, 10), d = 1;
        for (std::size_t i = 0; i < frac_len; ++i) d *= 10;
        return RationalBias(n, d);
    }

    mpz_class qnum() const { return den - num; }
    mpq_class p() const { return mpq_class(num, den); }
    mpq_class q() const { return mpq_class(qnum(), den); }
    RationalBias swapped() const { return RationalBias(qnum(), den); }
    bool symmetric() const { return 2 * num == den; }

    BiasModel to_model() const { return BiasModel(mpq_class(num, den).get_d()); }
};

/// Natural log of a positive big integer, exact to double rounding.
inline double log_mpz(const mpz_class& z) {
    if (z <= 0) throw std::domain_error("log_mpz: nonpositive argument");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * M_LN2;
}

inline double log_mpq(const mpq_class& r) {
    return log_mpz(mpz_class(r.get_num())) - log_mpz(mpz_class(r.get_den()));
}

}  // namespace patprof

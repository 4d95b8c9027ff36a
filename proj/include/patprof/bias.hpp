// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>

namespace patprof {

/// Memoryless source with bias p in [1/2, 1): precomputed natural-log
/// constants used throughout.  h is the Bernoulli entropy in nats.
struct BiasModel {
    double p = 0.5;
    double q = 0.5;
    double h = 0.0;            // -p ln p - q ln q
    double log_inv_p = 0.0;    // ln(1/p)
    double log_inv_q = 0.0;    // ln(1/q)
    double log_p_over_q = 0.0; // ln(p/q), 0 iff p = 1/2

    BiasModel() : BiasModel(0.5) {}

    explicit BiasModel(double p_) {
        if (!(p_ >= 0.5 && p_ < 1.0))
            throw std::invalid_argument("BiasModel: p must lie in [1/2, 1)");
        p = p_;
        q = 1.0 - p_;
        log_inv_p = -std::log(p);
        log_inv_q = -std::log(q);
        log_p_over_q = log_inv_q - log_inv_p;
        h = p * log_inv_p + q * log_inv_q;
    }

    bool symmetric() const { return p == q; }
};

}  // namespace patprof

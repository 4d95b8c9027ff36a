// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "patprof/asympt.hpp"
#include "patprof/kernel.hpp"

using namespace patprof;

TEST_CASE("kernel: fixed values of T") {
    for (double p : {0.5, 0.6, 0.7, 0.9}) {
        KernelFuncs kf((BiasModel(p)));
        REQUIRE(kf.T(0.0) == Catch::Approx(2.0).margin(1e-14));
        REQUIRE(kf.T(-1.0) == Catch::Approx(1.0).margin(1e-14));
    }
}

TEST_CASE("kernel: entropy and curvature at s = -1, p = 0.7") {
    BiasModel m(0.7);
    KernelFuncs kf(m);
    // Lambda'(-1) = h, Lambda''(-1) = p q ln^2(p/q)
    REQUIRE(kf.dlambda(-1.0) == Catch::Approx(0.610864302054893).epsilon(1e-12));
    REQUIRE(kf.dlambda(-1.0) == Catch::Approx(m.h).epsilon(1e-14));
    REQUIRE(kf.d2lambda(-1.0) == Catch::Approx(0.150761869485514).epsilon(1e-12));
}

namespace {
// extended-precision oracle so the second difference at step 1e-5 is not
// drowned by double roundoff
long double lambda_ld(long double s, const BiasModel& m) {
    long double lp = -logl(static_cast<long double>(m.p));
    long double lq = -logl(static_cast<long double>(m.q));
    return logl(expl(s * lp) + expl(s * lq));
}
}  // namespace

TEST_CASE("kernel: closed-form derivatives match central differences") {
    BiasModel m(0.7);
    KernelFuncs kf(m);
    const long double step = 1e-5L;
    auto rng_state = 12345ULL;
    for (int i = 0; i < 20; ++i) {
        rng_state = rng_state * 6364136223846793005ULL + 1442695040888963407ULL;
        double s = -3.0 + 6.0 * static_cast<double>(rng_state >> 11) * 0x1.0p-53;
        long double sl = s;
        double fd1 = static_cast<double>((lambda_ld(sl + step, m) - lambda_ld(sl - step, m)) / (2 * step));
        double fd2 = static_cast<double>(
            (lambda_ld(sl + step, m) - 2 * lambda_ld(sl, m) + lambda_ld(sl - step, m)) / (step * step));
        REQUIRE(std::abs(fd1 - kf.dlambda(s)) <= 1e-6 * std::abs(kf.dlambda(s)));
        REQUIRE(std::abs(fd2 - kf.d2lambda(s)) <= 1e-6 * std::abs(kf.d2lambda(s)));
    }
}

TEST_CASE("saddle point: analytic identities") {
    BiasModel m(0.7);
    SECTION("rho = 0 at alpha = 2/ln(1/(pq)), beta = alpha ln 2") {
        double alpha0 = 2.0 / (m.log_inv_p + m.log_inv_q);
        auto sp = rho_beta(alpha0, m);
        REQUIRE(std::abs(sp.rho) < 1e-12);
        REQUIRE(sp.beta == Catch::Approx(alpha0 * M_LN2).epsilon(1e-12));
    }
    SECTION("rho = -1 and beta = 1 at alpha = 1/h") {
        auto sp = rho_beta(1.0 / m.h, m);
        REQUIRE(std::abs(sp.rho + 1.0) < 1e-12);
        REQUIRE(std::abs(sp.beta - 1.0) < 1e-12);
        REQUIRE(sp.kappa == Catch::Approx(0.150761869485514).epsilon(1e-10));
    }
    SECTION("frozen spot value near the rho = 0 point") {
        auto sp = rho_beta(1.281520, m);
        REQUIRE(std::abs(sp.beta - 0.888285) <= 1e-5);
    }
    SECTION("the saddle equation alpha Lambda'(rho) = 1 holds on a grid") {
        KernelFuncs kf(m);
        const double lo = 1.0 / m.log_inv_q, hi = 1.0 / m.log_inv_p;
        for (int i = 1; i <= 50; ++i) {
            double alpha = lo + (hi - lo) * static_cast<double>(i) / 51.0;
            auto sp = rho_beta(alpha, m);
            REQUIRE(std::abs(alpha * kf.dlambda(sp.rho) - 1.0) < 1e-9);
        }
    }
    SECTION("beta <= 1 with the max at alpha = 1/h") {
        const double lo = 1.0 / m.log_inv_q, hi = 1.0 / m.log_inv_p;
        double best_beta = -1e9, best_alpha = 0;
        for (int i = 1; i <= 50; ++i) {
            double alpha = lo + (hi - lo) * static_cast<double>(i) / 51.0;
            auto sp = rho_beta(alpha, m);
            REQUIRE(sp.beta <= 1.0 + 1e-12);
            if (sp.beta > best_beta) {
                best_beta = sp.beta;
                best_alpha = alpha;
            }
        }
        // the grid maximum sits in the cell containing 1/h
        double cell = (hi - lo) / 51.0;
        REQUIRE(std::abs(best_alpha - 1.0 / m.h) <= cell);
        REQUIRE(rho_beta(1.0 / m.h, m).beta == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("domain errors") {
        REQUIRE_THROWS_AS(rho_beta(0.5, m), std::domain_error);
        REQUIRE_THROWS_AS(rho_beta(5.0, m), std::domain_error);
        REQUIRE_THROWS_AS(rho_beta(1.4, BiasModel(0.5)), std::invalid_argument);
    }
}

TEST_CASE("rho is strictly decreasing in alpha", "[property]") {
    BiasModel m(0.6);
    const double lo = 1.0 / m.log_inv_q, hi = 1.0 / m.log_inv_p;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 40; ++i) {
        double alpha = lo + (hi - lo) * static_cast<double>(i) / 41.0;
        auto sp = rho_beta(alpha, m);
        REQUIRE(sp.rho < prev);
        prev = sp.rho;
    }
}

TEST_CASE("height/fillup/depth predictors: frozen evaluations") {
    const std::int64_t n = 1 << 20;
    SECTION("symmetric") {
        BiasModel m(0.5);
        REQUIRE(predict_height(n, m) == Catch::Approx(26.324555320336759).epsilon(1e-12));
        REQUIRE(predict_fillup(n, m) ==
                Catch::Approx((std::log(1048576.0) - std::log(std::log(1048576.0))) / M_LN2)
                    .epsilon(1e-12));
    }
    SECTION("asymmetric p = 0.7") {
        BiasModel m(0.7);
        REQUIRE(predict_height(n, m) == Catch::Approx(40.418696117905017).epsilon(1e-10));
        REQUIRE(predict_fillup(n, m) == Catch::Approx(10.711418552560464).epsilon(1e-10));
    }
    SECTION("depth mean and variance constants, p = 0.7") {
        BiasModel m(0.7);
        auto [mean, var] = predict_depth(1 << 12, m);
        double ln_n = std::log(4096.0);
        REQUIRE(mean == Catch::Approx(ln_n * 1.637024780521776).epsilon(1e-12));
        REQUIRE(var == Catch::Approx(ln_n * 0.661389468149676).epsilon(1e-10));
    }
    SECTION("guard") {
        REQUIRE_THROWS_AS(predict_height(8, BiasModel(0.7)), std::invalid_argument);
    }
}

// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "patprof/dist_engine.hpp"
#include "patprof/profile_table.hpp"
#include "patprof/rational.hpp"

using namespace patprof;

TEST_CASE("RationalBias: decimal parsing is exact") {
    auto b = RationalBias::from_decimal("0.7");
    REQUIRE(b.num == 7);
    REQUIRE(b.den == 10);
    auto half = RationalBias::from_decimal("0.5");
    REQUIRE(half.num == 1);
    REQUIRE(half.den == 2);
    REQUIRE_THROWS_AS(RationalBias::from_decimal("1.5"), std::invalid_argument);
    REQUIRE_THROWS_AS(RationalBias::from_decimal("x"), std::invalid_argument);
}

TEST_CASE("mean profile table: universal small values") {
    for (const char* ps : {"0.5", "0.6", "0.7", "0.9"}) {
        auto bias = RationalBias::from_decimal(ps);
        RationalProfileTable t(bias, 5, 4);
        REQUIRE(t.mu(1, 0) == 1);
        REQUIRE(t.mu(2, 0) == 0);
        REQUIRE(t.mu(2, 1) == 2);
        REQUIRE(t.mu(3, 1) == 1);
        REQUIRE(t.mu(3, 2) == 2);
        REQUIRE(t.mu(3, 3) == 0);  // mu_{n,k} = 0 for k >= n
    }
}

TEST_CASE("mean profile table: mu_{4,1} at p = 0.7 is 116/179") {
    auto bias = RationalBias::from_decimal("0.7");
    RationalProfileTable t(bias, 4, 3);
    REQUIRE(t.mu(4, 1) == mpq_class(116, 179));
    REQUIRE(t.mu_double(4, 1) == Catch::Approx(0.6480446927374302).epsilon(1e-15));
    // row must sum to n
    REQUIRE(t.mu(4, 1) + t.mu(4, 2) + t.mu(4, 3) == 4);
}

TEST_CASE("conservation: sum_k mu_{n,k} = n exactly up to n = 60") {
    for (const char* ps : {"0.5", "0.7"}) {
        auto bias = RationalBias::from_decimal(ps);
        RationalProfileTable t(bias, 60, 59);
        for (int n = 1; n <= 60; ++n) REQUIRE(t.conservation_holds(n));
    }
}

TEST_CASE("profile tables are invariant under p <-> q") {
    auto bias = RationalBias::from_decimal("0.7");
    RationalProfileTable tp(bias, 24, 23);
    RationalProfileTable tq(bias.swapped(), 24, 23);
    for (int n = 1; n <= 24; ++n)
        for (int k = 0; k < n; ++k) REQUIRE(tp.mu(n, k) == tq.mu(n, k));
}

TEST_CASE("float backend agrees with the rational backend to 1e-10 relative") {
    auto bias = RationalBias::from_decimal("0.7");
    const int nmax = 120;
    RationalProfileTable exact(bias, nmax, 30);
    FloatProfileTable approx(BiasModel(0.7), nmax, FloatTableOptions{30, 12.0, 1e-8});
    for (int n = 1; n <= nmax; ++n) {
        for (int k = 0; k <= std::min(n - 1, 30); ++k) {
            double e = exact.mu_double(n, k);
            double f = approx.mu(n, k);
            if (e == 0.0)
                REQUIRE(f == 0.0);
            else
                REQUIRE(std::abs(f - e) <= 1e-10 * e);
        }
    }
}

TEST_CASE("float backend: conservation drift is tiny when rows are complete") {
    FloatProfileTable t(BiasModel(0.7), 200, FloatTableOptions{199, 12.0, 1e-8});
    REQUIRE(t.max_conservation_drift() < 1e-10);
    REQUIRE(t.conservation_ok());
}

TEST_CASE("csv export: both backends, parseable and faithful") {
    auto bias = RationalBias::from_decimal("0.7");
    RationalProfileTable tq(bias, 5, 4);
    std::ostringstream qs;
    export_csv(tq, qs);
    REQUIRE(qs.str().rfind("n,k,mu_num,mu_den\n1,0,1,1\n", 0) == 0);
    REQUIRE(qs.str().find("4,1,116,179") != std::string::npos);

    FloatProfileTable tf(BiasModel(0.7), 5, FloatTableOptions{4, 12.0, 1e-8});
    std::ostringstream fs;
    export_csv(tf, fs);
    std::istringstream in(fs.str());
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "n,k,mu");
    double mu41 = -1;
    while (std::getline(in, line)) {
        if (line.rfind("4,1,", 0) == 0) mu41 = std::strtod(line.c_str() + 4, nullptr);
    }
    REQUIRE(mu41 == Catch::Approx(116.0 / 179.0).epsilon(1e-12));
}

TEST_CASE("float backend: window truncation does not change values") {
    BiasModel m(0.7);
    FloatProfileTable windowed(m, 300, FloatTableOptions{25, 12.0, 1e-8});
    FloatProfileTable full(m, 300, FloatTableOptions{25, 0.0, 1e-8});
    for (int n = 1; n <= 300; n += 7)
        for (int k = 0; k <= 25; ++k) {
            double a = windowed.mu(n, k), b = full.mu(n, k);
            if (b != 0.0) REQUIRE(std::abs(a / b - 1.0) < 1e-12);
        }
}

TEST_CASE("n = 1 conventions: height 0, fillup -1, depth 0") {
    DistEngine eng(RationalBias::from_decimal("0.7"));
    auto hp = eng.height_pmf(1);
    REQUIRE(hp[0] == 1);
    auto fp = eng.fillup_pmf(1);
    REQUIRE(fp[0] == 1);  // index 0 carries Pr[F = -1]
    auto dp = eng.depth_pmf(1);
    REQUIRE(dp[0] == 1);
}

TEST_CASE("log_mu reaches far below double range") {
    auto bias = RationalBias::from_decimal("0.7");
    RationalProfileTable t(bias, 90, 89);
    double lm = t.log_mu(90, 88);
    REQUIRE(std::isfinite(lm));
    REQUIRE(lm < -900.0);  // ~ p^{k^2/2} territory, far past double underflow
}

TEST_CASE("split distribution: exact weights and symmetry") {
    auto b7 = RationalBias::from_decimal("0.7");
    SECTION("n = 2 is forced") {
        auto w = split_dist(2, b7);
        REQUIRE(w.size() == 1);
        REQUIRE(w[0] == 1);
    }
    SECTION("n = 3 at p = 1/2 is uniform") {
        auto w = split_dist(3, RationalBias::from_decimal("0.5"));
        REQUIRE(w[0] == mpq_class(1, 2));
        REQUIRE(w[1] == mpq_class(1, 2));
    }
    SECTION("n = 4, p = 0.7: w_2 = 63/179") {
        auto w = split_dist(4, b7);
        REQUIRE(w[1] == mpq_class(63, 179));
    }
    SECTION("weights sum to 1 and satisfy w_j(p) = w_{n-j}(q)") {
        for (int n : {2, 3, 5, 9, 16}) {
            auto wp = split_dist(n, b7);
            auto wq = split_dist(n, b7.swapped());
            mpq_class sum = 0;
            for (auto& x : wp) sum += x;
            REQUIRE(sum == 1);
            for (int j = 1; j <= n - 1; ++j)
                REQUIRE(wp[static_cast<std::size_t>(j - 1)] ==
                        wq[static_cast<std::size_t>(n - j - 1)]);
        }
    }
}

TEST_CASE("profile pmf: exact small anchors") {
    DistEngine eng(RationalBias::from_decimal("0.7"));
    SECTION("B_{2,1} = 2 surely") {
        auto pmf = eng.profile_pmf(2, 1);
        REQUIRE(pmf.size() == 3);
        REQUIRE(pmf[2] == 1);
    }
    SECTION("B_{3,1} = 1 surely") {
        auto pmf = eng.profile_pmf(3, 1);
        REQUIRE(pmf[1] == 1);
        REQUIRE(pmf[0] == 0);
    }
    SECTION("B_{4,1} is Bernoulli(116/179)") {
        auto pmf = eng.profile_pmf(4, 1);
        REQUIRE(pmf[0] == mpq_class(63, 179));
        REQUIRE(pmf[1] == mpq_class(116, 179));
        auto [mean, var] = moments(pmf);
        REQUIRE(mean == mpq_class(116, 179));
    }
    SECTION("guard against combinatorial blowup") {
        REQUIRE_THROWS_AS(eng.profile_pmf(26, 3), std::invalid_argument);
    }
}

TEST_CASE("profile pmf means equal the profile table exactly (n <= 12)") {
    for (const char* ps : {"0.5", "0.7"}) {
        auto bias = RationalBias::from_decimal(ps);
        DistEngine eng(bias);
        RationalProfileTable table(bias, 12, 11);
        for (int n = 1; n <= 12; ++n) {
            for (int k = 0; k < n; ++k) {
                auto [mean, var] = moments(eng.profile_pmf(n, k));
                REQUIRE(mean == table.mu(n, k));
                REQUIRE(var >= 0);
            }
        }
    }
}

TEST_CASE("height and fillup tables: exact anchors and coherence") {
    DistEngine eng(RationalBias::from_decimal("0.7"));
    SECTION("height of three items is always 2") {
        REQUIRE(eng.height_cdf(3, 2) == 1);
        REQUIRE(eng.height_cdf(3, 1) == 0);
    }
    SECTION("P[H_4 = 2] equals the even-split weight") {
        REQUIRE(eng.height_cdf(4, 2) - eng.height_cdf(4, 1) == mpq_class(63, 179));
    }
    SECTION("cdf coherence, support bounds, F+1 <= H") {
        for (int n : {2, 4, 7, 10}) {
            REQUIRE(eng.height_cdf(n, n - 1) == 1);
            auto hp = eng.height_pmf(n);
            auto fp = eng.fillup_pmf(n);
            mpq_class hsum = 0, fsum = 0;
            for (auto& x : hp) hsum += x;
            for (auto& x : fp) fsum += x;
            REQUIRE(hsum == 1);
            REQUIRE(fsum == 1);
            // support of H_n within [ceil(log2 n), n-1]
            int lg = 0;
            while ((1 << lg) < n) ++lg;
            for (int k = 0; k < lg; ++k) REQUIRE(hp[static_cast<std::size_t>(k)] == 0);
            // Pr[F >= k] <= Pr[H >= k], monotone ccdfs
            mpq_class prev = 1;
            for (int k = 0; k <= n; ++k) {
                mpq_class pf = eng.fillup_ccdf(n, k + 1);  // Pr[F >= k]
                mpq_class ph = k == 0 ? mpq_class(1) : 1 - eng.height_cdf(n, k - 1);
                REQUIRE(pf <= ph);
                REQUIRE(pf <= prev);
                prev = pf;
            }
        }
    }
}

TEST_CASE("depth pmf: exact anchors and moments") {
    DistEngine eng(RationalBias::from_decimal("0.7"));
    SECTION("universal n = 3 distribution") {
        for (const char* ps : {"0.5", "0.7", "0.9"}) {
            DistEngine e2(RationalBias::from_decimal(ps));
            auto pmf = e2.depth_pmf(3);
            REQUIRE(pmf[1] == mpq_class(1, 3));
            REQUIRE(pmf[2] == mpq_class(2, 3));
            auto [mean, var] = moments(pmf);
            REQUIRE(mean == mpq_class(5, 3));
            REQUIRE(var == mpq_class(2, 9));
        }
    }
    SECTION("point-mass moments") {
        std::vector<mpq_class> pm{0, 0, 1};  // mass at 2
        auto [mean, var] = moments(pm);
        REQUIRE(mean == 2);
        REQUIRE(var == 0);
    }
    SECTION("whole table in one shot: every pmf is a probability vector") {
        auto t = eng.dist_table(7);
        REQUIRE(t.n == 7);
        mpq_class s1 = 0, s2 = 0, s3 = 0;
        for (auto& x : t.height_pmf) s1 += x;
        for (auto& x : t.fillup_pmf) s2 += x;
        for (auto& x : t.depth_pmf) s3 += x;
        REQUIRE(s1 == 1);
        REQUIRE(s2 == 1);
        REQUIRE(s3 == 1);
        for (auto& pmf : t.profile_pmf) {
            mpq_class s = 0;
            for (auto& x : pmf) s += x;
            REQUIRE(s == 1);
        }
    }
    SECTION("depth pmf sums to one and matches mu/n") {
        RationalProfileTable table(RationalBias::from_decimal("0.7"), 9, 8);
        auto pmf = eng.depth_pmf(9);
        mpq_class sum = 0;
        for (auto& x : pmf) sum += x;
        REQUIRE(sum == 1);
        for (int k = 0; k < 9; ++k)
            REQUIRE(pmf[static_cast<std::size_t>(k)] == table.mu(9, k) / 9);
    }
}

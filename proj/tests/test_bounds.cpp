#include "seqrec/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

using namespace seqrec;

TEST_CASE("sequential lower bound") {
    CHECK(seq_lower_bound_m(100, 2.0) == doctest::Approx(2.302585092994046).epsilon(1e-12));
    CHECK(seq_lower_bound_m(2, std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(seq_lower_bound_m(1, 1.0), std::domain_error);
    CHECK_THROWS_AS(seq_lower_bound_m(100, 0.0), std::domain_error);
    CHECK_THROWS_AS(seq_lower_bound_m(100, -1.0), std::domain_error);
}

TEST_CASE("sequential thresholding sufficient rate") {
    CHECK(st_sufficient_m(8, 4096, 0.5) ==
          doctest::Approx((std::log(8.0) + std::log(std::log(4096.0))) / 0.5)
              .epsilon(1e-12));
    CHECK(st_sufficient_m(8, 4096, 0.5) == doctest::Approx(8.395670541772343).epsilon(1e-9));
    CHECK(st_sufficient_m(2, 3, 1.0) == doctest::Approx(0.7871950081766443).epsilon(1e-9));
    CHECK_THROWS_AS(st_sufficient_m(2, 2, 1.0), std::domain_error);

    // Always at least the sequential lower bound once log log n > 0.
    for (std::uint32_t n : {16u, 64u, 1024u, 65536u}) {
        for (std::uint32_t s : {2u, 5u, 10u}) {
            if (s >= n) continue;
            CHECK(st_sufficient_m(s, n, 0.7) >= seq_lower_bound_m(s, 0.7));
        }
    }
}

TEST_CASE("non-sequential lower bound") {
    CHECK(nonseq_lower_bound_m(10000, 2.0) ==
          doctest::Approx(4.605170185988092).epsilon(1e-12));
    CHECK(nonseq_lower_bound_m(2, std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(nonseq_lower_bound_m(10, 0.0), std::domain_error);

    // Symmetric Gaussian model: the non-sequential/sequential ratio is
    // log n / log s.
    double d = 2.0;  // theta = 2 in both directions
    CHECK(nonseq_lower_bound_m(10000, d) / seq_lower_bound_m(10, d) ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("chernoff min-max bound") {
    Model g = Model::gaussian_shift(2.0);
    auto result = chernoff_minmax_m(10000, 10, g);

    // Closed-form balance point for the Gaussian family:
    // (1-lambda)/lambda = sqrt(log(n-s)/log(s)).
    double ratio = std::sqrt(std::log(9990.0) / std::log(10.0));
    double lambda_oracle = 1.0 / (1.0 + ratio);
    double m_oracle = std::log(10.0) / (lambda_oracle * lambda_oracle * 2.0);
    CHECK(std::abs(result.lambda_star - lambda_oracle) < 1e-7);
    // The objective is kinked at the minimizer, so a 1e-8 window on lambda
    // bounds the value error by the branch slope, around 1e-6 here.
    CHECK(std::abs(result.m_star - m_oracle) < 1e-5);

    // Grid-search oracle over the same objective: never better than the
    // refined minimizer, and close at the grid resolution.
    double best = 1e300;
    for (int i = 1; i < 100000; ++i) {
        double lambda = i / 100000.0;
        auto [dn, da] = tilted_divergences(g, lambda);
        double value = std::max(std::log(9990.0) / dn, std::log(10.0) / da);
        best = std::min(best, value);
    }
    CHECK(result.m_star <= best + 1e-9);
    CHECK(best - result.m_star < 1e-3);

    // At the minimizer the two inner terms balance.
    auto [dn, da] = tilted_divergences(g, result.lambda_star);
    double term_null = std::log(9990.0) / dn;
    double term_alt = std::log(10.0) / da;
    CHECK(std::abs(term_null - term_alt) < 1e-6 * result.m_star);

    // Symmetric split with a symmetric pair puts the minimizer at 1/2.
    Model b = Model::bernoulli_pair(0.2, 0.8);
    auto sym = chernoff_minmax_m(20, 10, b);
    CHECK(sym.lambda_star == doctest::Approx(0.5).epsilon(1e-6));

    CHECK_THROWS_AS(chernoff_minmax_m(10, 1, g), std::domain_error);
    CHECK_THROWS_AS(chernoff_minmax_m(10, 10, g), std::domain_error);
}

TEST_CASE("wald expected-sample lower bound") {
    CHECK(wald_E0N_lower(0.01, 0.01, 2.0) ==
          doctest::Approx(2.2516087265659492).epsilon(1e-12));
    CHECK(wald_E0N_lower(0.5, 0.5, 3.7) == doctest::Approx(0.0).epsilon(1e-12));
    double direct = 0.001 * std::log(0.001 / 0.5) + 0.999 * std::log(0.999 / 0.5);
    CHECK(wald_E0N_lower(0.001, 0.5, 1.0) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(wald_E0N_lower(0.001, 0.5, 1.0) ==
          doctest::Approx(0.6852399254477132).epsilon(1e-9));
    CHECK_THROWS_AS(wald_E0N_lower(0.0, 0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(wald_E0N_lower(0.5, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(wald_E0N_lower(0.5, 0.5, 0.0), std::domain_error);
}

TEST_CASE("family-wise error bounds") {
    CHECK(fwer_union_upper(0.0, 0.0, 100, 10) == doctest::Approx(0.0));
    CHECK(fwer_union_upper(1e-4, 1e-2, 10000, 10) ==
          doctest::Approx(0.999 + 0.1).epsilon(1e-12));
    CHECK(fwer_union_upper(0.2, 0.3, 50, 50) == doctest::Approx(50 * 0.3).epsilon(1e-12));

    CHECK(fwer_exp_lower(0.0, 0.0, 100, 10) == doctest::Approx(0.0));
    // alpha = 1/(n-s), beta = 1/s gives 1 - e^-2 regardless of n and s.
    for (std::uint32_t n : {100u, 5000u}) {
        for (std::uint32_t s : {4u, 25u}) {
            double v = fwer_exp_lower(1.0 / (n - s), 1.0 / s, n, s);
            CHECK(v == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
        }
    }
    CHECK(fwer_exp_lower(0.0, 1.0, 100, 10) ==
          doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-12));

    // The exponential lower bound never exceeds 1 and never exceeds the union
    // bound in the small-error regime.
    for (double alpha : {0.0, 0.01, 0.05, 0.1}) {
        for (double beta : {0.0, 0.01, 0.05, 0.1}) {
            double lower = fwer_exp_lower(alpha, beta, 200, 14);
            CHECK(lower <= 1.0);
            CHECK(fwer_union_upper(alpha, beta, 200, 14) >= lower);
        }
    }
}

TEST_CASE("rate ordering across the (n, s) grid for a symmetric model") {
    double d = 0.5;  // GaussianShift{1}: d01 = d10
    for (std::uint32_t n = 16; n <= 65536; n *= 4) {
        std::uint32_t s_max = static_cast<std::uint32_t>(std::sqrt(double(n)));
        for (std::uint32_t s = 2; s <= s_max; ++s) {
            double seq = seq_lower_bound_m(s, d);
            double st = st_sufficient_m(s, n, d);
            double nonseq = nonseq_lower_bound_m(n, d);
            CHECK(seq <= st);
            CHECK(st <= nonseq);
        }
    }
}

TEST_CASE("bound report bundles the pieces consistently") {
    Model g = Model::gaussian_shift(2.0);
    BoundReport report = bound_report(10000, 10, g);
    CHECK(report.d01 == doctest::Approx(2.0));
    CHECK(report.d10 == doctest::Approx(2.0));
    CHECK(report.seq_lower_m == doctest::Approx(std::log(10.0) / 2.0).epsilon(1e-12));
    CHECK(report.seq_lower_m == doctest::Approx(1.151292546497023).epsilon(1e-9));
    CHECK(report.nonseq_lower_m == doctest::Approx(std::log(10000.0) / 2.0).epsilon(1e-12));
    CHECK(report.lambda_star > 0.0);
    CHECK(report.lambda_star < 1.0);
    CHECK(report.chernoff_minmax_m > 0.0);
    CHECK(report.seq_lower_m <= report.st_sufficient_m);
}

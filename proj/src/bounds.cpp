#include "seqrec/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqrec {

double seq_lower_bound_m(std::uint32_t s, double d01) {
    if (s < 2) throw std::domain_error("seq_lower_bound_m: s must be >= 2");
    if (!(d01 > 0.0)) {
        throw std::domain_error("seq_lower_bound_m: degenerate model (d01 <= 0)");
    }
    return std::log(static_cast<double>(s)) / d01;
}

double st_sufficient_m(std::uint32_t s, std::uint32_t n, double d01) {
    if (s < 2) throw std::domain_error("st_sufficient_m: s must be >= 2");
    if (n <= s) throw std::domain_error("st_sufficient_m: n must exceed s");
    if (n < 3) throw std::domain_error("st_sufficient_m: n must be >= 3");
    if (!(d01 > 0.0)) {
        throw std::domain_error("st_sufficient_m: degenerate model (d01 <= 0)");
    }
    double nd = static_cast<double>(n);
    return (std::log(static_cast<double>(s)) + std::log(std::log(nd))) / d01;
}

double nonseq_lower_bound_m(std::uint32_t n, double d10) {
    if (n < 2) throw std::domain_error("nonseq_lower_bound_m: n must be >= 2");
    if (!(d10 > 0.0)) {
        throw std::domain_error("nonseq_lower_bound_m: degenerate model (d10 <= 0)");
    }
    return std::log(static_cast<double>(n)) / d10;
}

ChernoffMinMax chernoff_minmax_m(std::uint32_t n, std::uint32_t s, const Model& model) {
    if (s < 2 || s >= n) throw std::domain_error("chernoff_minmax_m: require 2 <= s < n");
    const double log_null = std::log(static_cast<double>(n - s));
    const double log_alt = std::log(static_cast<double>(s));

    auto objective = [&](double lambda) {
        auto [d_null, d_alt] = tilted_divergences(model, lambda);
        double term_null =
            d_null > 0.0 ? log_null / d_null : std::numeric_limits<double>::infinity();
        double term_alt =
            d_alt > 0.0 ? log_alt / d_alt : std::numeric_limits<double>::infinity();
        return term_null > term_alt ? term_null : term_alt;
    };

    // Coarse interior grid; both endpoint terms diverge so the minimizer is
    // interior.
    constexpr int kGrid = 1024;
    int best = 1;
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= kGrid; ++i) {
        double lambda = static_cast<double>(i) / (kGrid + 1);
        double value = objective(lambda);
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    double lo = static_cast<double>(best - 1) / (kGrid + 1);
    double hi = static_cast<double>(best + 1) / (kGrid + 1);
    if (lo <= 0.0) lo = 1e-12;
    if (hi >= 1.0) hi = 1.0 - 1e-12;

    while (hi - lo > 1e-8) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (objective(m1) <= objective(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    double lambda_star = 0.5 * (lo + hi);
    return {objective(lambda_star), lambda_star};
}

double wald_E0N_lower(double alpha, double beta, double d01) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
        throw std::domain_error("wald_E0N_lower: alpha and beta must lie in (0,1)");
    }
    if (!(d01 > 0.0)) {
        throw std::domain_error("wald_E0N_lower: degenerate model (d01 <= 0)");
    }
    return (alpha * std::log(alpha / (1.0 - beta)) +
            (1.0 - alpha) * std::log((1.0 - alpha) / beta)) /
           d01;
}

double fwer_union_upper(double alpha, double beta, std::uint32_t n, std::uint32_t s) {
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
        throw std::domain_error("fwer_union_upper: alpha and beta must lie in [0,1]");
    }
    if (s > n) throw std::domain_error("fwer_union_upper: s must satisfy s <= n");
    return static_cast<double>(n - s) * alpha + static_cast<double>(s) * beta;
}

double fwer_exp_lower(double alpha, double beta, std::uint32_t n, std::uint32_t s) {
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
        throw std::domain_error("fwer_exp_lower: alpha and beta must lie in [0,1]");
    }
    if (s > n) throw std::domain_error("fwer_exp_lower: s must satisfy s <= n");
    return 1.0 - std::exp(-beta * static_cast<double>(s)) *
                     std::exp(-alpha * static_cast<double>(n - s));
}

BoundReport bound_report(std::uint32_t n, std::uint32_t s, const Model& model) {
    double d01 = kl_divergence(model, KlDirection::d01);
    double d10 = kl_divergence(model, KlDirection::d10);
    auto minmax = chernoff_minmax_m(n, s, model);
    return BoundReport{seq_lower_bound_m(s, d01),
                       st_sufficient_m(s, n, d01),
                       nonseq_lower_bound_m(n, d10),
                       minmax.m_star,
                       minmax.lambda_star,
                       d01,
                       d10};
}

} // namespace seqrec

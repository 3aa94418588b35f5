// bounds.hpp
//
// Closed-form sample-complexity and error-probability bounds for the
// coordinate-wise recovery problem. All results are real-valued (no ceiling
// applied) and use natural logarithms.
#pragma once

#include <cstdint>
#include <utility>

#include "seqrec/models.hpp"

namespace seqrec {

struct BoundReport {
    double seq_lower_m;       // necessary for any sequential procedure
    double st_sufficient_m;   // sufficient for sequential thresholding
    double nonseq_lower_m;    // necessary for any non-sequential procedure
    double chernoff_minmax_m; // min-max non-sequential bound over the tilted family
    double lambda_star;       // tilt achieving the min-max
    double d01;               // D(f0||f1)
    double d10;               // D(f1||f0)
};

// log(s) / d01. Requires s >= 2 and d01 > 0.
double seq_lower_bound_m(std::uint32_t s, double d01);

// (log(s) + log(log(n))) / d01. Requires s >= 2, n > s, n >= 3.
double st_sufficient_m(std::uint32_t s, std::uint32_t n, double d01);

// log(n) / d10. Requires n >= 2 and d10 > 0.
double nonseq_lower_bound_m(std::uint32_t n, double d10);

struct ChernoffMinMax {
    double m_star;
    double lambda_star;
};

// min over lambda in (0,1) of
//   max( log(n-s)/D(f_lambda||f0), log(s)/D(f_lambda||f1) ).
// Coarse 1024-point grid followed by ternary refinement to |dlambda| < 1e-8;
// the objective is unimodal for the built-in models. Requires 2 <= s < n.
ChernoffMinMax chernoff_minmax_m(std::uint32_t n, std::uint32_t s, const Model& model);

// Wald's lower bound on the expected sample count under the null for any
// sequential test with error probabilities (alpha, beta):
//   (alpha log(alpha/(1-beta)) + (1-alpha) log((1-alpha)/beta)) / d01.
double wald_E0N_lower(double alpha, double beta, double d01);

// Union bound on the family-wise error rate: (n-s) alpha + s beta, uncapped.
double fwer_union_upper(double alpha, double beta, std::uint32_t n, std::uint32_t s);

// Exponential lower bound: 1 - exp(-beta s) exp(-alpha (n-s)).
double fwer_exp_lower(double alpha, double beta, std::uint32_t n, std::uint32_t s);

BoundReport bound_report(std::uint32_t n, std::uint32_t s, const Model& model);

} // namespace seqrec

// stats.hpp
//
// Small numeric toolbox: standard normal CDF/quantile and binomial
// probabilities. The quantile is a rational approximation polished with one
// Halley step, accurate to ~1e-15 over (0,1).
#pragma once

#include <vector>

namespace seqrec::stats {

double normal_cdf(double x);

// Inverse of normal_cdf on (0,1). Throws std::domain_error outside (0,1).
double normal_quantile(double p);

double log_binomial_coefficient(int n, int k);

// P(Binomial(n, p) = k), computed in log space.
double binomial_pmf(int n, int k, double p);

// pmf for k = 0..n in one pass.
std::vector<double> binomial_pmf_table(int n, double p);

} // namespace seqrec::stats

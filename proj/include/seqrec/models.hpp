// models.hpp
//
// Observation models for the two-hypothesis component test. A Model carries
// the null/alternative pair (f0, f1) and offers sampling, log-likelihood
// ratios, KL divergences in both directions, the exponentially tilted family
// between the pair, and null-distribution quantiles of the block statistic.
//
// Two built-in families:
//   GaussianShift{theta}:   f0 = N(0,1),        f1 = N(theta,1), theta > 0
//   BernoulliPair{p0, p1}:  f0 = Bernoulli(p0), f1 = Bernoulli(p1),
//                           p0, p1 strictly inside (0,1), p0 != p1
//
// All logarithms are natural.
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <variant>

#include "seqrec/rng.hpp"

namespace seqrec {

enum class Hypothesis { Null, Alt };

// d01 = D(f0 || f1) = E0[-llr],  d10 = D(f1 || f0) = E1[llr].
enum class KlDirection { d01, d10 };

struct GaussianShift {
    double theta;
};

struct BernoulliPair {
    double p0;
    double p1;
};

class Model {
public:
    static Model gaussian_shift(double theta);
    static Model bernoulli_pair(double p0, double p1);

    const std::variant<GaussianShift, BernoulliPair>& spec() const { return spec_; }
    bool is_gaussian() const { return std::holds_alternative<GaussianShift>(spec_); }
    bool is_bernoulli() const { return std::holds_alternative<BernoulliPair>(spec_); }
    const GaussianShift& gaussian() const { return std::get<GaussianShift>(spec_); }
    const BernoulliPair& bernoulli() const { return std::get<BernoulliPair>(spec_); }

private:
    explicit Model(std::variant<GaussianShift, BernoulliPair> spec)
        : spec_(std::move(spec)) {}
    std::variant<GaussianShift, BernoulliPair> spec_;
};

// Normalized geometric bridge f_lambda ~ f0^lambda * f1^(1-lambda):
// lambda = 0 reproduces f1, lambda = 1 reproduces f0.
class TiltedModel {
public:
    TiltedModel(const Model& base, double lambda);

    double lambda() const { return lambda_; }
    const Model& base() const { return base_; }

    // Gaussian tilts stay Gaussian with unit variance.
    double gaussian_mean() const;
    // Bernoulli tilts stay two-point; normalized masses.
    double mass_at_one() const;
    double mass_at_zero() const;

    // Density (Gaussian) or point mass (Bernoulli, y in {0,1}) of f_lambda.
    double density(double y) const;

    double kl_to_null() const;  // D(f_lambda || f0)
    double kl_to_alt() const;   // D(f_lambda || f1)

private:
    Model base_;
    double lambda_;
    double gaussian_mean_ = 0.0;
    double mass_one_ = 0.0;  // Bernoulli only
};

// One i.i.d. draw from f0 (Null) or f1 (Alt), consuming the given stream.
double sample(const Model& model, Hypothesis h, rng::Stream& stream);

// log(f1(y)/f0(y)). Bernoulli observations must be exactly 0 or 1.
double llr(const Model& model, double y);

// Normalized block statistic: mean of llr over the observations.
// For Bernoulli models this is computed from the count of ones, so every
// block with the same count yields the bit-identical statistic; thresholds
// produced by null_quantile_gamma then compare exactly.
double block_llr(const Model& model, std::span<const double> ys);

double kl_divergence(const Model& model, KlDirection dir);

TiltedModel tilt(const Model& model, double lambda);

// (D(f_lambda||f0), D(f_lambda||f1)).
std::pair<double, double> tilted_divergences(const Model& model, double lambda);

struct NullQuantile {
    double gamma;
    double rho_achieved;
};

// Left-continuous generalized inverse CDF of the block statistic under f0:
//   gamma = inf{ g : P(t <= g | f0) >= rho },  rho_achieved = P(t <= gamma | f0).
// Continuous models achieve rho exactly; discrete models may overshoot.
// Requires rho in [1/2, 1) and block_size >= 1.
NullQuantile null_quantile_gamma(const Model& model, int block_size, double rho);

// Exact block statistic value for a Bernoulli block with `ones` ones out of
// `block_size`; the lattice shared by block_llr, null_quantile_gamma and the
// exact enumeration.
double bernoulli_block_statistic(const BernoulliPair& b, int ones, int block_size);

} // namespace seqrec

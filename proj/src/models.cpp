#include "seqrec/models.hpp"

#include <cmath>
#include <stdexcept>

#include "seqrec/stats.hpp"

namespace seqrec {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double normal_density(double y, double mean) {
    double d = y - mean;
    return kInvSqrt2Pi * std::exp(-0.5 * d * d);
}

// KL between Bernoulli(q) and Bernoulli(p), natural log.
double bernoulli_kl(double q, double p) {
    return q * std::log(q / p) + (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
}

bool is_binary(double y) { return y == 0.0 || y == 1.0; }

} // namespace

Model Model::gaussian_shift(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw std::invalid_argument("GaussianShift: theta must be finite and > 0");
    }
    return Model(GaussianShift{theta});
}

Model Model::bernoulli_pair(double p0, double p1) {
    if (!(p0 > 0.0 && p0 < 1.0) || !(p1 > 0.0 && p1 < 1.0)) {
        throw std::invalid_argument(
            "BernoulliPair: probabilities must lie strictly inside (0,1)");
    }
    if (p0 == p1) {
        throw std::invalid_argument("BernoulliPair: p0 and p1 must differ");
    }
    return Model(BernoulliPair{p0, p1});
}

TiltedModel::TiltedModel(const Model& base, double lambda) : base_(base), lambda_(lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::domain_error("tilt: lambda must lie in [0,1]");
    }
    if (base.is_gaussian()) {
        gaussian_mean_ = (1.0 - lambda) * base.gaussian().theta;
    } else {
        const auto& b = base.bernoulli();
        // f0^lambda f1^(1-lambda), normalized over {0,1}.
        double w1 = std::exp(lambda * std::log(b.p0) + (1.0 - lambda) * std::log(b.p1));
        double w0 = std::exp(lambda * std::log(1.0 - b.p0) +
                             (1.0 - lambda) * std::log(1.0 - b.p1));
        mass_one_ = w1 / (w1 + w0);
    }
}

double TiltedModel::gaussian_mean() const {
    if (!base_.is_gaussian()) throw std::domain_error("gaussian_mean: not a Gaussian model");
    return gaussian_mean_;
}

double TiltedModel::mass_at_one() const {
    if (!base_.is_bernoulli()) throw std::domain_error("mass_at_one: not a Bernoulli model");
    return mass_one_;
}

double TiltedModel::mass_at_zero() const { return 1.0 - mass_at_one(); }

double TiltedModel::density(double y) const {
    if (base_.is_gaussian()) return normal_density(y, gaussian_mean_);
    if (!is_binary(y)) throw std::domain_error("density: Bernoulli support is {0,1}");
    return y == 1.0 ? mass_one_ : 1.0 - mass_one_;
}

double TiltedModel::kl_to_null() const {
    if (base_.is_gaussian()) {
        double d = gaussian_mean_;  // f0 mean is 0
        return 0.5 * d * d;
    }
    return bernoulli_kl(mass_one_, base_.bernoulli().p0);
}

double TiltedModel::kl_to_alt() const {
    if (base_.is_gaussian()) {
        double d = gaussian_mean_ - base_.gaussian().theta;
        return 0.5 * d * d;
    }
    return bernoulli_kl(mass_one_, base_.bernoulli().p1);
}

double sample(const Model& model, Hypothesis h, rng::Stream& stream) {
    if (model.is_gaussian()) {
        double mean = h == Hypothesis::Alt ? model.gaussian().theta : 0.0;
        return mean + stats::normal_quantile(stream.next_uniform01());
    }
    const auto& b = model.bernoulli();
    double p = h == Hypothesis::Alt ? b.p1 : b.p0;
    return stream.next_uniform01() < p ? 1.0 : 0.0;
}

double llr(const Model& model, double y) {
    if (model.is_gaussian()) {
        double theta = model.gaussian().theta;
        return theta * y - 0.5 * theta * theta;
    }
    const auto& b = model.bernoulli();
    if (!is_binary(y)) throw std::domain_error("llr: Bernoulli observation must be 0 or 1");
    return y == 1.0 ? std::log(b.p1 / b.p0)
                    : std::log((1.0 - b.p1) / (1.0 - b.p0));
}

double bernoulli_block_statistic(const BernoulliPair& b, int ones, int block_size) {
    double a1 = std::log(b.p1 / b.p0);
    double a0 = std::log((1.0 - b.p1) / (1.0 - b.p0));
    return (ones * a1 + (block_size - ones) * a0) / block_size;
}

double block_llr(const Model& model, std::span<const double> ys) {
    if (ys.empty()) throw std::domain_error("block_llr: empty observation block");
    if (model.is_bernoulli()) {
        const auto& b = model.bernoulli();
        int ones = 0;
        for (double y : ys) {
            if (!is_binary(y)) {
                throw std::domain_error("block_llr: Bernoulli observation must be 0 or 1");
            }
            ones += y == 1.0 ? 1 : 0;
        }
        return bernoulli_block_statistic(b, ones, static_cast<int>(ys.size()));
    }
    double sum = 0.0;
    for (double y : ys) sum += llr(model, y);
    return sum / static_cast<double>(ys.size());
}

double kl_divergence(const Model& model, KlDirection dir) {
    if (model.is_gaussian()) {
        double theta = model.gaussian().theta;
        return 0.5 * theta * theta;  // symmetric for a pure mean shift
    }
    const auto& b = model.bernoulli();
    return dir == KlDirection::d01 ? bernoulli_kl(b.p0, b.p1)
                                   : bernoulli_kl(b.p1, b.p0);
}

TiltedModel tilt(const Model& model, double lambda) { return TiltedModel(model, lambda); }

std::pair<double, double> tilted_divergences(const Model& model, double lambda) {
    TiltedModel t(model, lambda);
    return {t.kl_to_null(), t.kl_to_alt()};
}

NullQuantile null_quantile_gamma(const Model& model, int block_size, double rho) {
    if (block_size < 1) {
        throw std::domain_error("null_quantile_gamma: block_size must be >= 1");
    }
    if (!(rho >= 0.5 && rho < 1.0)) {
        throw std::domain_error("null_quantile_gamma: rho must lie in [1/2, 1)");
    }
    if (model.is_gaussian()) {
        // Under f0 the block statistic is N(-theta^2/2, theta^2/block_size).
        double theta = model.gaussian().theta;
        double gamma = -0.5 * theta * theta +
                       theta / std::sqrt(static_cast<double>(block_size)) *
                           stats::normal_quantile(rho);
        return {gamma, rho};
    }
    // Exact binomial enumeration. The block statistic is strictly monotone in
    // the count of ones (increasing iff p1 > p0), so the quantile is the
    // binomial quantile pushed through the count-to-statistic map.
    const auto& b = model.bernoulli();
    auto pmf = stats::binomial_pmf_table(block_size, b.p0);
    bool increasing = b.p1 > b.p0;
    double cum = 0.0;
    if (increasing) {
        for (int c = 0; c <= block_size; ++c) {
            cum += pmf[static_cast<std::size_t>(c)];
            if (cum >= rho) return {bernoulli_block_statistic(b, c, block_size), cum};
        }
    } else {
        for (int c = block_size; c >= 0; --c) {
            cum += pmf[static_cast<std::size_t>(c)];
            if (cum >= rho) return {bernoulli_block_statistic(b, c, block_size), cum};
        }
    }
    // Accumulated mass reaches 1 >= rho before the loop ends; keep the
    // compiler satisfied.
    throw std::logic_error("null_quantile_gamma: binomial mass did not reach rho");
}

} // namespace seqrec

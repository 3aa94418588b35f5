#include "seqrec/procedures.hpp"

#include <cmath>
#include <stdexcept>

namespace seqrec {

int SeqThreshConfig::block_size() const {
    int bs = static_cast<int>(std::llround(rho * m));
    return bs < 1 ? 1 : bs;
}

void SeqThreshConfig::validate() const {
    if (m < 1) throw std::domain_error("sequential thresholding: m must be >= 1");
    if (!(rho >= 0.5 && rho < 1.0)) {
        throw std::domain_error("sequential thresholding: rho must lie in [1/2, 1)");
    }
    if (passes < 1) throw std::domain_error("sequential thresholding: K must be >= 1");
}

void SprtConfig::validate() const {
    if (!(lower_a < 0.0 && upper_b > 0.0)) {
        throw std::domain_error("sprt: boundaries must satisfy A < 0 < B");
    }
}

void FixedSampleConfig::validate() const {
    if (m < 1) throw std::domain_error("fixed-sample: m must be >= 1");
}

const char* procedure_tag(const ProcedureConfig& config) {
    if (std::holds_alternative<SeqThreshConfig>(config)) return "st";
    if (std::holds_alternative<SprtConfig>(config)) return "sprt";
    return "fixed";
}

RecoveryResult run_sequential_thresholding(const ProblemInstance& instance,
                                           const SeqThreshConfig& config,
                                           std::uint64_t run_seed) {
    config.validate();
    const std::uint32_t n = instance.n;
    const int block = config.block_size();
    const double gamma =
        config.gamma_override
            ? *config.gamma_override
            : null_quantile_gamma(instance.model, block, config.rho).gamma;

    RecoveryResult result;
    result.ledger = MeasurementLedger(n);
    result.passes_survived.assign(n, 0);

    std::vector<std::uint32_t> survivors(n);
    for (std::uint32_t i = 0; i < n; ++i) survivors[i] = i;

    std::vector<double> block_obs(static_cast<std::size_t>(block));
    for (int pass = 0; pass < config.passes && !survivors.empty(); ++pass) {
        std::vector<std::uint32_t> next;
        next.reserve(survivors.size());
        for (std::uint32_t i : survivors) {
            rng::Stream stream(rng::derive(run_seed, i, static_cast<std::uint64_t>(pass)));
            Hypothesis h = instance.hypothesis_of(i);
            for (int j = 0; j < block; ++j) {
                block_obs[static_cast<std::size_t>(j)] = sample(instance.model, h, stream);
            }
            result.ledger.record(i, static_cast<std::uint64_t>(block));
            double t = block_llr(instance.model, block_obs);
            if (t > gamma) {
                result.passes_survived[i] = pass + 1;
                next.push_back(i);
            }
        }
        survivors.swap(next);
    }
    result.estimated_support = std::move(survivors);
    return result;
}

RecoveryResult run_parallel_sprt(const ProblemInstance& instance, const SprtConfig& config,
                                 std::uint64_t run_seed) {
    config.validate();
    const std::uint32_t n = instance.n;
    const double midpoint = 0.5 * (config.lower_a + config.upper_b);
    const bool bernoulli = instance.model.is_bernoulli();
    double step_one = 0.0, step_zero = 0.0;
    if (bernoulli) {
        const auto& b = instance.model.bernoulli();
        step_one = std::log(b.p1 / b.p0);
        step_zero = std::log((1.0 - b.p1) / (1.0 - b.p0));
    }

    RecoveryResult result;
    result.ledger = MeasurementLedger(n);

    for (std::uint32_t i = 0; i < n; ++i) {
        rng::Stream stream(rng::derive(run_seed, i, 0));
        Hypothesis h = instance.hypothesis_of(i);
        double cum = 0.0;
        std::uint64_t ones = 0;
        std::uint64_t steps = 0;
        bool decided = false;
        bool in_support = false;
        while (steps < config.max_steps) {
            double y = sample(instance.model, h, stream);
            ++steps;
            if (bernoulli) {
                // Recompute from the ones count so the cumulative value lands
                // on the same lattice as the exact path enumeration.
                ones += y == 1.0 ? 1u : 0u;
                cum = static_cast<double>(ones) * step_one +
                      static_cast<double>(steps - ones) * step_zero;
            } else {
                cum += llr(instance.model, y);
            }
            if (cum >= config.upper_b) {
                decided = true;
                in_support = true;
                break;
            }
            if (cum <= config.lower_a) {
                decided = true;
                in_support = false;
                break;
            }
        }
        if (!decided) {
            // Truncated: midpoint rule, ties resolved to the null.
            in_support = cum > midpoint;
        }
        result.ledger.record(i, steps);
        if (in_support) result.estimated_support.push_back(i);
    }
    return result;
}

RecoveryResult run_fixed_sample(const ProblemInstance& instance,
                                const FixedSampleConfig& config, std::uint64_t run_seed) {
    config.validate();
    const std::uint32_t n = instance.n;

    RecoveryResult result;
    result.ledger = MeasurementLedger(n);

    std::vector<double> obs(static_cast<std::size_t>(config.m));
    for (std::uint32_t i = 0; i < n; ++i) {
        rng::Stream stream(rng::derive(run_seed, i, 0));
        Hypothesis h = instance.hypothesis_of(i);
        for (int j = 0; j < config.m; ++j) {
            obs[static_cast<std::size_t>(j)] = sample(instance.model, h, stream);
        }
        result.ledger.record(i, static_cast<std::uint64_t>(config.m));
        if (block_llr(instance.model, obs) > config.gamma) {
            result.estimated_support.push_back(i);
        }
    }
    return result;
}

RecoveryResult run_procedure(const ProblemInstance& instance, const ProcedureConfig& config,
                             std::uint64_t run_seed) {
    return std::visit(
        [&](const auto& cfg) -> RecoveryResult {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, SeqThreshConfig>) {
                return run_sequential_thresholding(instance, cfg, run_seed);
            } else if constexpr (std::is_same_v<T, SprtConfig>) {
                return run_parallel_sprt(instance, cfg, run_seed);
            } else {
                return run_fixed_sample(instance, cfg, run_seed);
            }
        },
        config);
}

std::pair<double, double> wald_boundaries(double alpha_target, double beta_target) {
    if (!(alpha_target > 0.0 && alpha_target < 1.0) ||
        !(beta_target > 0.0 && beta_target < 1.0)) {
        throw std::domain_error("wald_boundaries: targets must lie in (0,1)");
    }
    double a = std::log(beta_target / (1.0 - alpha_target));
    double b = std::log((1.0 - beta_target) / alpha_target);
    if (!(a < 0.0 && b > 0.0)) {
        throw std::domain_error(
            "wald_boundaries: degenerate targets (require A < 0 < B)");
    }
    return {a, b};
}

} // namespace seqrec

#include "seqrec/harness.hpp"

#include <algorithm>
#include <cmath>

#include "seqrec/stats.hpp"
#include <stdexcept>
#include <thread>

namespace seqrec {

namespace {

struct TrialTally {
    std::uint64_t false_positives = 0;
    std::uint64_t false_negatives = 0;
    std::uint64_t fwer_events = 0;
    std::uint64_t total_measurements = 0;
    unsigned __int128 total_measurements_sq = 0;

    void merge(const TrialTally& other) {
        false_positives += other.false_positives;
        false_negatives += other.false_negatives;
        fwer_events += other.fwer_events;
        total_measurements += other.total_measurements;
        total_measurements_sq += other.total_measurements_sq;
    }
};

void tally_one_trial(const ProcedureConfig& config, std::uint32_t n, std::uint32_t s,
                     const Model& model, std::uint64_t master_seed, std::uint64_t trial,
                     TrialTally& tally) {
    std::uint64_t instance_seed = rng::derive(master_seed, rng::kInstanceStream, trial);
    std::uint64_t run_seed = rng::derive(master_seed, rng::kRunStream, trial);
    ProblemInstance instance = generate_instance(n, s, model, instance_seed);
    RecoveryResult result = run_procedure(instance, config, run_seed);

    // Both supports are sorted; count the symmetric difference.
    std::uint64_t fp = 0, fn = 0;
    auto est = result.estimated_support.begin();
    auto truth = instance.support.begin();
    while (est != result.estimated_support.end() || truth != instance.support.end()) {
        if (truth == instance.support.end() ||
            (est != result.estimated_support.end() && *est < *truth)) {
            ++fp;
            ++est;
        } else if (est == result.estimated_support.end() || *truth < *est) {
            ++fn;
            ++truth;
        } else {
            ++est;
            ++truth;
        }
    }
    tally.false_positives += fp;
    tally.false_negatives += fn;
    tally.fwer_events += (fp + fn) > 0 ? 1 : 0;
    tally.total_measurements += result.ledger.total;
    tally.total_measurements_sq += static_cast<unsigned __int128>(result.ledger.total) *
                                   result.ledger.total;
}

double binomial_se(double p_hat, std::uint64_t count) {
    if (count == 0) return 0.0;
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(count));
}

} // namespace

MonteCarloEstimate run_trials(const ProcedureConfig& config, std::uint32_t n,
                              std::uint32_t s, const Model& model, std::uint64_t trials,
                              std::uint64_t master_seed, unsigned workers) {
    if (trials < 1) throw std::domain_error("run_trials: trials must be >= 1");
    if (s > n) throw std::domain_error("run_trials: s must satisfy s <= n");
    std::visit([](const auto& cfg) { cfg.validate(); }, config);

    TrialTally tally;
    if (workers <= 1 || trials == 1) {
        for (std::uint64_t t = 0; t < trials; ++t) {
            tally_one_trial(config, n, s, model, master_seed, t, tally);
        }
    } else {
        unsigned used = static_cast<unsigned>(
            std::min<std::uint64_t>(workers, trials));
        std::vector<TrialTally> partial(used);
        std::vector<std::thread> threads;
        threads.reserve(used);
        for (unsigned w = 0; w < used; ++w) {
            threads.emplace_back([&, w] {
                for (std::uint64_t t = w; t < trials; t += used) {
                    tally_one_trial(config, n, s, model, master_seed, t, partial[w]);
                }
            });
        }
        for (auto& th : threads) th.join();
        // Fixed merge order; all tallies are integers, so the totals are
        // identical for any worker count.
        for (const auto& p : partial) tally.merge(p);
    }

    MonteCarloEstimate est;
    est.trials = trials;
    const std::uint64_t null_obs = trials * static_cast<std::uint64_t>(n - s);
    const std::uint64_t alt_obs = trials * static_cast<std::uint64_t>(s);
    if (null_obs > 0) {
        double a = static_cast<double>(tally.false_positives) / static_cast<double>(null_obs);
        est.alpha_hat = a;
        est.alpha_se = binomial_se(a, null_obs);
    }
    if (alt_obs > 0) {
        double b = static_cast<double>(tally.false_negatives) / static_cast<double>(alt_obs);
        est.beta_hat = b;
        est.beta_se = binomial_se(b, alt_obs);
    }
    est.fwer_hat = static_cast<double>(tally.fwer_events) / static_cast<double>(trials);
    est.fwer_se = binomial_se(est.fwer_hat, trials);

    double mean_total = static_cast<double>(tally.total_measurements) /
                        static_cast<double>(trials);
    est.avg_measurements_per_dim = mean_total / static_cast<double>(n);
    if (trials > 1) {
        double sum = static_cast<double>(tally.total_measurements);
        double sum_sq = static_cast<double>(tally.total_measurements_sq);
        double var = (sum_sq - sum * sum / static_cast<double>(trials)) /
                     static_cast<double>(trials - 1);
        if (var < 0.0) var = 0.0;
        est.avg_measurements_se =
            std::sqrt(var / static_cast<double>(trials)) / static_cast<double>(n);
    }

    est.setup.procedure = procedure_tag(config);
    est.setup.n = n;
    est.setup.s = s;
    est.setup.trials = trials;
    est.setup.master_seed = master_seed;
    if (const auto* st = std::get_if<SeqThreshConfig>(&config)) {
        est.setup.m = st->m;
        est.setup.rho = st->rho;
        est.setup.passes = st->passes;
    } else if (const auto* fx = std::get_if<FixedSampleConfig>(&config)) {
        est.setup.m = fx->m;
    }
    return est;
}

BudgetAuditReport budget_audit(const MonteCarloEstimate& estimate, int m, std::uint32_t n,
                               std::uint32_t s, int passes, double rho_achieved,
                               double tolerance) {
    BudgetAuditReport report;
    report.tolerance = tolerance;
    report.mean_total = estimate.avg_measurements_per_dim * static_cast<double>(n);
    report.bound = static_cast<double>(m) * static_cast<double>(n - s) +
                   static_cast<double>(m) * static_cast<double>(s) *
                       static_cast<double>(passes) * rho_achieved;
    report.scaled_bound = report.bound * (1.0 + tolerance);
    report.margin = report.scaled_bound - report.mean_total;
    report.pass = report.mean_total <= report.scaled_bound;
    return report;
}

int default_passes(std::uint32_t n) {
    if (n < 2) return 1;
    return static_cast<int>(std::ceil(std::log(static_cast<double>(n))));
}

std::uint64_t default_max_steps(std::uint32_t n, double d01) {
    if (!(d01 > 0.0)) throw std::domain_error("default_max_steps: d01 must be > 0");
    double steps = std::ceil(std::log(static_cast<double>(n)) / d01);
    if (steps < 1.0) steps = 1.0;
    return 100ull * static_cast<std::uint64_t>(steps);
}

std::vector<SweepRow> sweep_m(const SweepSpec& spec, unsigned workers) {
    if (spec.m_grid.empty()) throw std::domain_error("sweep_m: empty m grid");
    for (std::size_t i = 1; i < spec.m_grid.size(); ++i) {
        if (spec.m_grid[i] <= spec.m_grid[i - 1]) {
            throw std::domain_error("sweep_m: m grid must be strictly increasing");
        }
    }
    if (!spec.model) throw std::domain_error("sweep_m: model required");
    if (spec.trials_per_point < 1) throw std::domain_error("sweep_m: trials must be >= 1");
    if (spec.procedure != "st" && spec.procedure != "fixed") {
        throw std::domain_error("sweep_m: procedure must be 'st' or 'fixed'");
    }
    if (spec.procedure == "fixed" && !spec.gamma_override) {
        throw std::domain_error("sweep_m: fixed-sample sweep requires gamma");
    }

    const Model& model = *spec.model;
    double d01 = kl_divergence(model, KlDirection::d01);
    double d10 = kl_divergence(model, KlDirection::d10);

    std::vector<SweepRow> rows;
    rows.reserve(spec.m_grid.size());
    for (std::size_t point = 0; point < spec.m_grid.size(); ++point) {
        int m = spec.m_grid[point];
        ProcedureConfig config;
        if (spec.procedure == "st") {
            SeqThreshConfig st;
            st.m = m;
            st.rho = spec.rho;
            st.passes = spec.passes ? *spec.passes : default_passes(spec.n);
            st.gamma_override = spec.gamma_override;
            config = st;
        } else {
            config = FixedSampleConfig{m, *spec.gamma_override};
        }
        std::uint64_t point_seed = rng::derive(spec.master_seed, rng::kSweepStream, point);
        SweepRow row;
        row.m = m;
        row.estimate = run_trials(config, spec.n, spec.s, model, spec.trials_per_point,
                                  point_seed, workers);
        // The derived point seed drives the trials; report the sweep master
        // seed so the row echoes the user-facing configuration.
        row.estimate.setup.master_seed = spec.master_seed;
        if (spec.s >= 2) row.seq_lower_m = seq_lower_bound_m(spec.s, d01);
        if (spec.s >= 2 && spec.n > spec.s && spec.n >= 3) {
            row.st_sufficient_m = st_sufficient_m(spec.s, spec.n, d01);
        }
        if (spec.n >= 2) row.nonseq_lower_m = nonseq_lower_bound_m(spec.n, d10);
        rows.push_back(std::move(row));
    }
    return rows;
}

OracleOverflowError::OracleOverflowError(std::uint64_t states_, std::uint64_t limit_)
    : std::runtime_error("enumerate_exact: state space of " + std::to_string(states_) +
                         " states exceeds the limit of " + std::to_string(limit_)),
      states(states_),
      limit(limit_) {}

namespace {

struct ComponentRates {
    double alpha;  // P(declared in support | f0)
    double beta;   // P(not declared | f1)
    double e0_n;   // expected measurements under f0
    double e1_n;   // expected measurements under f1
};

// Keep probability of one block threshold test under Bernoulli(p):
// P(t > gamma) over the exact count lattice.
double block_keep_probability(const BernoulliPair& b, int block, double gamma, double p) {
    auto pmf = stats::binomial_pmf_table(block, p);
    double keep = 0.0;
    for (int c = 0; c <= block; ++c) {
        if (bernoulli_block_statistic(b, c, block) > gamma) {
            keep += pmf[static_cast<std::size_t>(c)];
        }
    }
    return keep;
}

ComponentRates enumerate_fixed(const FixedSampleConfig& config, const BernoulliPair& b,
                               const EnumerationLimits& limits) {
    std::uint64_t states = static_cast<std::uint64_t>(config.m) + 1;
    if (states > limits.max_states) throw OracleOverflowError(states, limits.max_states);
    double keep0 = block_keep_probability(b, config.m, config.gamma, b.p0);
    double keep1 = block_keep_probability(b, config.m, config.gamma, b.p1);
    return {keep0, 1.0 - keep1, static_cast<double>(config.m),
            static_cast<double>(config.m)};
}

ComponentRates enumerate_seq_thresh(const SeqThreshConfig& config, const Model& model,
                                    const BernoulliPair& b,
                                    const EnumerationLimits& limits) {
    int block = config.block_size();
    std::uint64_t states = static_cast<std::uint64_t>(config.passes) *
                           (static_cast<std::uint64_t>(block) + 1);
    if (states > limits.max_states) throw OracleOverflowError(states, limits.max_states);
    double gamma = config.gamma_override
                       ? *config.gamma_override
                       : null_quantile_gamma(model, block, config.rho).gamma;
    double keep0 = block_keep_probability(b, block, gamma, b.p0);
    double keep1 = block_keep_probability(b, block, gamma, b.p1);

    // Survival through all K passes; expected blocks measured is the partial
    // geometric sum over pass-survival probabilities.
    double e0_blocks = 0.0, surv0 = 1.0;
    double e1_blocks = 0.0, surv1 = 1.0;
    for (int k = 0; k < config.passes; ++k) {
        e0_blocks += surv0;
        e1_blocks += surv1;
        surv0 *= keep0;
        surv1 *= keep1;
    }
    return {surv0, 1.0 - surv1, e0_blocks * block, e1_blocks * block};
}

// Truncated random-walk DP over (step, ones-count). Absorption at each step
// depends only on the current lattice point, so surviving mass per point is a
// complete description of the process.
ComponentRates enumerate_sprt(const SprtConfig& config, const BernoulliPair& b,
                              const EnumerationLimits& limits) {
    const std::uint64_t horizon = config.max_steps;
    std::uint64_t states = (horizon + 1) * (horizon + 2) / 2;
    if (states > limits.max_states) throw OracleOverflowError(states, limits.max_states);

    const double step_one = std::log(b.p1 / b.p0);
    const double step_zero = std::log((1.0 - b.p1) / (1.0 - b.p0));
    const double midpoint = 0.5 * (config.lower_a + config.upper_b);

    ComponentRates rates{0.0, 0.0, 0.0, 0.0};
    for (int hyp = 0; hyp < 2; ++hyp) {
        double p = hyp == 0 ? b.p0 : b.p1;
        std::vector<double> alive{1.0};  // mass per ones-count, step 0
        double declared_alt = 0.0;
        double expected_steps = 0.0;
        for (std::uint64_t j = 1; j <= horizon; ++j) {
            std::vector<double> next(j + 1, 0.0);
            for (std::uint64_t c = 0; c < alive.size(); ++c) {
                double mass = alive[c];
                if (mass == 0.0) continue;
                next[c + 1] += mass * p;
                next[c] += mass * (1.0 - p);
            }
            std::vector<double> surviving(j + 1, 0.0);
            for (std::uint64_t c = 0; c <= j; ++c) {
                double mass = next[c];
                if (mass == 0.0) continue;
                double cum = static_cast<double>(c) * step_one +
                             static_cast<double>(j - c) * step_zero;
                if (cum >= config.upper_b) {
                    declared_alt += mass;
                    expected_steps += mass * static_cast<double>(j);
                } else if (cum <= config.lower_a) {
                    expected_steps += mass * static_cast<double>(j);
                } else {
                    surviving[c] = mass;
                }
            }
            alive.swap(surviving);
        }
        // Truncated mass: midpoint rule, ties to the null. After the loop
        // alive has horizon+1 slots, so the zeros count is horizon - c.
        for (std::uint64_t c = 0; c < alive.size(); ++c) {
            double mass = alive[c];
            if (mass == 0.0) continue;
            double cum = static_cast<double>(c) * step_one +
                         static_cast<double>(horizon - c) * step_zero;
            if (cum > midpoint) declared_alt += mass;
            expected_steps += mass * static_cast<double>(horizon);
        }
        if (hyp == 0) {
            rates.alpha = declared_alt;
            rates.e0_n = expected_steps;
        } else {
            rates.beta = 1.0 - declared_alt;
            rates.e1_n = expected_steps;
        }
    }
    return rates;
}

} // namespace

ExactErrorRates enumerate_exact(const ProcedureConfig& config, std::uint32_t n,
                                std::uint32_t s, const Model& model,
                                EnumerationLimits limits) {
    if (!model.is_bernoulli()) {
        throw std::domain_error("enumerate_exact: requires a discrete (Bernoulli) model");
    }
    if (s > n) throw std::domain_error("enumerate_exact: s must satisfy s <= n");
    std::visit([](const auto& cfg) { cfg.validate(); }, config);
    const auto& b = model.bernoulli();

    ComponentRates rates = std::visit(
        [&](const auto& cfg) -> ComponentRates {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, FixedSampleConfig>) {
                return enumerate_fixed(cfg, b, limits);
            } else if constexpr (std::is_same_v<T, SeqThreshConfig>) {
                return enumerate_seq_thresh(cfg, model, b, limits);
            } else {
                return enumerate_sprt(cfg, b, limits);
            }
        },
        config);

    ExactErrorRates result;
    if (s < n) result.alpha = rates.alpha;
    if (s > 0) result.beta = rates.beta;
    // Components are independent, so the family-wise error factorizes.
    result.fwer = 1.0 - std::pow(1.0 - rates.beta, static_cast<double>(s)) *
                            std::pow(1.0 - rates.alpha, static_cast<double>(n - s));
    result.expected_total_measurements =
        static_cast<double>(n - s) * rates.e0_n + static_cast<double>(s) * rates.e1_n;
    return result;
}

} // namespace seqrec

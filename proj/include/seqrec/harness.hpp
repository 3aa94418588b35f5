// harness.hpp
//
// Monte Carlo estimation of alpha, beta and the family-wise error rate,
// budget auditing against the sequential-thresholding bound, parameter sweeps
// over the per-dimension budget m, and an exact enumeration oracle for small
// Bernoulli configurations.
//
// Every trial derives its instance seed and procedure seed from
// (master_seed, trial index); tallies are integers, so the estimate is
// invariant to the number of worker threads.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqrec/bounds.hpp"
#include "seqrec/instance.hpp"
#include "seqrec/procedures.hpp"

namespace seqrec {

struct RunSetup {
    std::string procedure;
    std::uint32_t n = 0;
    std::uint32_t s = 0;
    std::optional<int> m;
    std::optional<double> rho;
    std::optional<int> passes;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
};

struct MonteCarloEstimate {
    // Pooled across all trials and components; absent when the component
    // class is empty (alpha when s = n, beta when s = 0).
    std::optional<double> alpha_hat;
    std::optional<double> alpha_se;
    std::optional<double> beta_hat;
    std::optional<double> beta_se;
    double fwer_hat = 0.0;
    double fwer_se = 0.0;
    double avg_measurements_per_dim = 0.0;
    double avg_measurements_se = 0.0;
    std::uint64_t trials = 0;
    RunSetup setup;
};

MonteCarloEstimate run_trials(const ProcedureConfig& config, std::uint32_t n,
                              std::uint32_t s, const Model& model, std::uint64_t trials,
                              std::uint64_t master_seed, unsigned workers = 1);

struct BudgetAuditReport {
    bool pass = false;
    double mean_total = 0.0;       // observed mean ledger total per trial
    double bound = 0.0;            // m(n-s) + m s K rho_achieved
    double scaled_bound = 0.0;     // bound * (1 + tolerance)
    double margin = 0.0;           // scaled_bound - mean_total
    double tolerance = 0.0;
};

// Checks the observed mean total against the sequential-thresholding budget
// bound m(n-s) + m s K rho_achieved, scaled by (1 + tolerance).
BudgetAuditReport budget_audit(const MonteCarloEstimate& estimate, int m, std::uint32_t n,
                               std::uint32_t s, int passes, double rho_achieved,
                               double tolerance);

struct SweepSpec {
    std::string procedure;  // "st" or "fixed"
    std::uint32_t n = 0;
    std::uint32_t s = 0;
    std::optional<Model> model;
    std::vector<int> m_grid;  // nonempty, strictly increasing
    std::uint64_t trials_per_point = 0;
    std::uint64_t master_seed = 0;
    // st parameters
    double rho = 0.5;
    std::optional<int> passes;            // default: ceil(log n)
    std::optional<double> gamma_override; // st override / fixed threshold
};

struct SweepRow {
    int m = 0;
    MonteCarloEstimate estimate;
    std::optional<double> seq_lower_m;
    std::optional<double> st_sufficient_m;
    std::optional<double> nonseq_lower_m;
};

std::vector<SweepRow> sweep_m(const SweepSpec& spec, unsigned workers = 1);

// Default pass count K = ceil(log n).
int default_passes(std::uint32_t n);

// Default SPRT truncation horizon: 100 * ceil(log(n)/d01).
std::uint64_t default_max_steps(std::uint32_t n, double d01);

struct EnumerationLimits {
    std::uint64_t max_states = 1ull << 24;
};

struct ExactErrorRates {
    std::optional<double> alpha;  // absent when s = n
    std::optional<double> beta;   // absent when s = 0
    double fwer = 0.0;
    double expected_total_measurements = 0.0;
};

class OracleOverflowError : public std::runtime_error {
public:
    OracleOverflowError(std::uint64_t states, std::uint64_t limit);
    std::uint64_t states;
    std::uint64_t limit;
};

// Exact per-component error probabilities for a Bernoulli model, combined
// across components via fwer = 1 - (1-beta)^s (1-alpha)^(n-s). Sequential
// thresholding and fixed-sample use closed binomial sums; the SPRT uses a
// dynamic program over (step, ones-count) paths bounded by max_steps.
// Throws OracleOverflowError when the state count exceeds limits.max_states
// and std::domain_error for non-Bernoulli models.
ExactErrorRates enumerate_exact(const ProcedureConfig& config, std::uint32_t n,
                                std::uint32_t s, const Model& model,
                                EnumerationLimits limits = {});

} // namespace seqrec

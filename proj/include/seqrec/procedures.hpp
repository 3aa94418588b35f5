// procedures.hpp
//
// The three support-recovery procedures:
//
//   * sequential thresholding: K passes; each pass measures a fresh block of
//     block_size observations per surviving component and keeps the component
//     iff that pass's block statistic strictly exceeds gamma;
//   * parallel SPRT: one sequential probability ratio test per component on
//     the cumulative log-likelihood ratio, truncated at max_steps;
//   * fixed-sample testing: exactly m observations per component, one
//     threshold test.
//
// Each run returns the estimated support plus a per-component measurement
// ledger. Measurement streams are derived per (run seed, component, pass), so
// a run is reproducible byte-for-byte and components may be processed in any
// order or concurrently.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "seqrec/instance.hpp"
#include "seqrec/models.hpp"

namespace seqrec {

struct MeasurementLedger {
    std::vector<std::uint64_t> per_component;
    std::uint64_t total = 0;

    explicit MeasurementLedger(std::size_t n = 0) : per_component(n, 0) {}
    void record(std::size_t component, std::uint64_t count) {
        per_component[component] += count;
        total += count;
    }
};

struct SeqThreshConfig {
    int m = 1;               // measurement budget per dimension
    double rho = 0.5;        // null elimination probability per pass, [1/2, 1)
    int passes = 1;          // K
    std::optional<double> gamma_override;

    // round(rho * m), floored at 1.
    int block_size() const;
    void validate() const;
};

struct SprtConfig {
    double lower_a = -1.0;        // A < 0
    double upper_b = 1.0;         // B > 0
    std::uint64_t max_steps = 1;  // 0 is legal: the truncation rule fires at Lambda = 0

    void validate() const;
};

struct FixedSampleConfig {
    int m = 1;
    double gamma = 0.0;

    void validate() const;
};

using ProcedureConfig = std::variant<SeqThreshConfig, SprtConfig, FixedSampleConfig>;

// "st", "sprt" or "fixed".
const char* procedure_tag(const ProcedureConfig& config);

struct RecoveryResult {
    std::vector<std::uint32_t> estimated_support;  // sorted
    MeasurementLedger ledger;
    // Sequential thresholding only: per-component count of passes survived;
    // a component is in the estimate iff it survived all K passes. Empty for
    // the other procedures.
    std::vector<int> passes_survived;
};

RecoveryResult run_sequential_thresholding(const ProblemInstance& instance,
                                           const SeqThreshConfig& config,
                                           std::uint64_t run_seed);

RecoveryResult run_parallel_sprt(const ProblemInstance& instance, const SprtConfig& config,
                                 std::uint64_t run_seed);

RecoveryResult run_fixed_sample(const ProblemInstance& instance,
                                const FixedSampleConfig& config, std::uint64_t run_seed);

RecoveryResult run_procedure(const ProblemInstance& instance, const ProcedureConfig& config,
                             std::uint64_t run_seed);

// Wald's boundary choice for target error rates: A = log(beta/(1-alpha)),
// B = log((1-beta)/alpha). Throws std::domain_error if the targets do not
// yield A < 0 < B.
std::pair<double, double> wald_boundaries(double alpha_target, double beta_target);

} // namespace seqrec

// report.hpp
//
// Result records and their rendering. The CSV schema is fixed:
//
//   procedure,n,s,m,rho,K,trials,seed,alpha_hat,alpha_se,beta_hat,beta_se,
//   fwer_hat,fwer_se,avg_meas_per_dim,seq_lower_m,st_sufficient_m,
//   nonseq_lower_m
//
// Reals are rendered with 9 significant digits; absent values are empty
// cells; the header row is always present. The resolved run configuration is
// echoed above the header as '# key = value' lines.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "seqrec/bounds.hpp"
#include "seqrec/harness.hpp"

namespace seqrec {

struct ResultRecord {
    std::string procedure;
    std::optional<std::uint32_t> n;
    std::optional<std::uint32_t> s;
    std::optional<int> m;
    std::optional<double> rho;
    std::optional<int> passes;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha_hat;
    std::optional<double> alpha_se;
    std::optional<double> beta_hat;
    std::optional<double> beta_se;
    std::optional<double> fwer_hat;
    std::optional<double> fwer_se;
    std::optional<double> avg_meas_per_dim;
    std::optional<double> seq_lower_m;
    std::optional<double> st_sufficient_m;
    std::optional<double> nonseq_lower_m;
    // Carried by the structured-text format only (no CSV column).
    std::optional<double> chernoff_minmax_m;
    std::optional<double> lambda_star;
    std::optional<double> d01;
    std::optional<double> d10;
};

ResultRecord record_from_estimate(const MonteCarloEstimate& estimate);
ResultRecord record_from_sweep_row(const SweepRow& row);
ResultRecord record_from_bounds(const BoundReport& report, std::uint32_t n,
                                std::uint32_t s);

// Render a real with 9 significant digits.
std::string format_real(double value);

void emit_csv(std::ostream& out, std::span<const ResultRecord> records,
              const std::string& config_echo);
void emit_text(std::ostream& out, std::span<const ResultRecord> records,
               const std::string& config_echo);

} // namespace seqrec

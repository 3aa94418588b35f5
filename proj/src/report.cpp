#include "seqrec/report.hpp"

#include <array>
#include <cstdio>
#include <sstream>

namespace seqrec {

namespace {

constexpr const char* kCsvHeader =
    "procedure,n,s,m,rho,K,trials,seed,alpha_hat,alpha_se,beta_hat,beta_se,"
    "fwer_hat,fwer_se,avg_meas_per_dim,seq_lower_m,st_sufficient_m,nonseq_lower_m";

std::string cell(const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
}

std::string cell_u32(const std::optional<std::uint32_t>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::string cell_u64(const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::string cell_int(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::vector<std::string> csv_cells(const ResultRecord& r) {
    return {r.procedure,
            cell_u32(r.n),
            cell_u32(r.s),
            cell_int(r.m),
            cell(r.rho),
            cell_int(r.passes),
            cell_u64(r.trials),
            cell_u64(r.seed),
            cell(r.alpha_hat),
            cell(r.alpha_se),
            cell(r.beta_hat),
            cell(r.beta_se),
            cell(r.fwer_hat),
            cell(r.fwer_se),
            cell(r.avg_meas_per_dim),
            cell(r.seq_lower_m),
            cell(r.st_sufficient_m),
            cell(r.nonseq_lower_m)};
}

void write_echo(std::ostream& out, const std::string& config_echo) {
    if (config_echo.empty()) return;
    std::istringstream lines(config_echo);
    std::string line;
    while (std::getline(lines, line)) {
        out << "# " << line << '\n';
    }
}

} // namespace

std::string format_real(double value) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.9g", value);
    return std::string(buf.data());
}

ResultRecord record_from_estimate(const MonteCarloEstimate& estimate) {
    ResultRecord r;
    r.procedure = estimate.setup.procedure;
    r.n = estimate.setup.n;
    r.s = estimate.setup.s;
    r.m = estimate.setup.m;
    r.rho = estimate.setup.rho;
    r.passes = estimate.setup.passes;
    r.trials = estimate.trials;
    r.seed = estimate.setup.master_seed;
    r.alpha_hat = estimate.alpha_hat;
    r.alpha_se = estimate.alpha_se;
    r.beta_hat = estimate.beta_hat;
    r.beta_se = estimate.beta_se;
    r.fwer_hat = estimate.fwer_hat;
    r.fwer_se = estimate.fwer_se;
    r.avg_meas_per_dim = estimate.avg_measurements_per_dim;
    return r;
}

ResultRecord record_from_sweep_row(const SweepRow& row) {
    ResultRecord r = record_from_estimate(row.estimate);
    r.m = row.m;
    r.seq_lower_m = row.seq_lower_m;
    r.st_sufficient_m = row.st_sufficient_m;
    r.nonseq_lower_m = row.nonseq_lower_m;
    return r;
}

ResultRecord record_from_bounds(const BoundReport& report, std::uint32_t n,
                                std::uint32_t s) {
    ResultRecord r;
    r.procedure = "bounds";
    r.n = n;
    r.s = s;
    r.seq_lower_m = report.seq_lower_m;
    r.st_sufficient_m = report.st_sufficient_m;
    r.nonseq_lower_m = report.nonseq_lower_m;
    r.chernoff_minmax_m = report.chernoff_minmax_m;
    r.lambda_star = report.lambda_star;
    r.d01 = report.d01;
    r.d10 = report.d10;
    return r;
}

void emit_csv(std::ostream& out, std::span<const ResultRecord> records,
              const std::string& config_echo) {
    write_echo(out, config_echo);
    out << kCsvHeader << '\n';
    for (const auto& record : records) {
        auto cells = csv_cells(record);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out << ',';
            out << cells[i];
        }
        out << '\n';
    }
}

void emit_text(std::ostream& out, std::span<const ResultRecord> records,
               const std::string& config_echo) {
    write_echo(out, config_echo);
    auto put = [&](const char* key, const std::string& value) {
        if (!value.empty()) out << key << " = " << value << '\n';
    };
    bool first = true;
    for (const auto& r : records) {
        if (!first) out << '\n';
        first = false;
        put("procedure", r.procedure);
        put("n", cell_u32(r.n));
        put("s", cell_u32(r.s));
        put("m", cell_int(r.m));
        put("rho", cell(r.rho));
        put("K", cell_int(r.passes));
        put("trials", cell_u64(r.trials));
        put("seed", cell_u64(r.seed));
        put("alpha_hat", cell(r.alpha_hat));
        put("alpha_se", cell(r.alpha_se));
        put("beta_hat", cell(r.beta_hat));
        put("beta_se", cell(r.beta_se));
        put("fwer_hat", cell(r.fwer_hat));
        put("fwer_se", cell(r.fwer_se));
        put("avg_meas_per_dim", cell(r.avg_meas_per_dim));
        put("seq_lower_m", cell(r.seq_lower_m));
        put("st_sufficient_m", cell(r.st_sufficient_m));
        put("nonseq_lower_m", cell(r.nonseq_lower_m));
        put("chernoff_minmax_m", cell(r.chernoff_minmax_m));
        put("lambda_star", cell(r.lambda_star));
        put("d01", cell(r.d01));
        put("d10", cell(r.d10));
    }
}

} // namespace seqrec

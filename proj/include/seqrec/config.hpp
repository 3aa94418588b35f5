// config.hpp
//
// Run configuration for the command-line front end.
//
// Flags map one-to-one onto config-file keys: `--n 4096` on the command line
// is `n = 4096` in a config file. Precedence is flags over config file over
// defaults. Unknown keys are errors. The fully resolved configuration is
// echoed (as parseable `key = value` text) into every output file header;
// `workers` and the config-file path are execution details and are excluded
// from the echo so identical runs produce identical bytes.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqrec {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitDomainError = 3,
    kExitIoError = 4,
    kExitOracleOverflow = 5,
};

struct RunConfig {
    std::string subcommand;  // bounds | run | sweep | audit | oracle

    std::optional<std::string> model;  // gaussian | bernoulli
    std::optional<double> theta;
    std::optional<double> p0;
    std::optional<double> p1;

    std::optional<std::uint32_t> n;
    std::optional<std::uint32_t> s;
    std::optional<int> m;
    std::vector<int> m_grid;

    std::optional<double> rho;
    std::optional<int> passes;  // --K

    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;

    std::optional<std::string> procedure;  // st | sprt | fixed
    std::optional<double> alpha_target;
    std::optional<double> beta_target;
    std::optional<double> sprt_a;
    std::optional<double> sprt_b;
    std::optional<std::uint64_t> max_steps;

    std::optional<double> gamma;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> max_states;

    std::string out = "-";      // "-" = stdout
    std::string format = "csv"; // csv | text
    unsigned workers = 1;       // execution detail, never echoed
};

// Apply one key/value pair. Throws ConfigError on unknown keys or unparseable
// values, naming the key.
void apply_config_key(RunConfig& config, const std::string& key, const std::string& value);

// Parse flat `key = value` text (the config-file format). Blank lines and
// lines starting with '#' are skipped.
void apply_config_text(RunConfig& config, const std::string& text);

// Parse a full command line: argv[1] is the subcommand, the rest are
// `--key value` (or `--key=value`) pairs. Reads --config files, applies
// precedence, fills defaults and validates.
RunConfig parse_command_line(int argc, const char* const* argv);

// Fill subcommand defaults and check every field; throws ConfigError with a
// message naming the offending field.
void finalize(RunConfig& config);

// The resolved configuration as config-file text (only fields that are set).
std::string resolved_config_text(const RunConfig& config);

std::string usage_text();

} // namespace seqrec

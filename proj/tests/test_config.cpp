#include "seqrec/config.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "seqrec/report.hpp"

using namespace seqrec;

namespace {

RunConfig parse(std::vector<std::string> args) {
    std::vector<const char*> argv;
    argv.push_back("seqrec");
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_command_line(static_cast<int>(argv.size()), argv.data());
}

std::string write_temp_config(const std::string& text) {
    auto path = std::filesystem::temp_directory_path() /
                ("seqrec_cfg_" + std::to_string(::getpid()) + ".cfg");
    std::ofstream file(path);
    file << text;
    return path.string();
}

} // namespace

TEST_CASE("parse: run subcommand resolves defaults") {
    auto c = parse({"run", "--procedure", "st", "--model", "gaussian", "--theta", "2",
                    "--n", "2048", "--s", "0", "--m", "4", "--seed", "1"});
    CHECK(c.subcommand == "run");
    CHECK(*c.rho == doctest::Approx(0.5));
    CHECK(*c.passes == 8);  // ceil(log 2048)
    CHECK(*c.trials == 500);
    CHECK(c.format == "csv");
    CHECK(c.out == "-");
}

TEST_CASE("parse: key=value form and workers flag") {
    auto c = parse({"run", "--procedure=fixed", "--model=gaussian", "--theta=1",
                    "--n=64", "--s=4", "--m=8", "--gamma=0", "--seed=3", "--workers=4"});
    CHECK(*c.gamma == doctest::Approx(0.0));
    CHECK(c.workers == 4);
}

TEST_CASE("parse: named rejections") {
    // Out-of-range rho.
    CHECK_THROWS_WITH_AS(parse({"run", "--procedure", "st", "--model", "gaussian",
                                "--theta", "2", "--n", "64", "--s", "4", "--m", "4",
                                "--seed", "1", "--rho", "0.3"}),
                         "--rho must lie in [1/2, 1)", ConfigError);
    // rho is meaningless for the fixed-sample procedure.
    CHECK_THROWS_AS(parse({"run", "--procedure", "fixed", "--model", "gaussian",
                           "--theta", "2", "--n", "64", "--s", "4", "--m", "4",
                           "--gamma", "0", "--seed", "1", "--rho", "0.6"}),
                    ConfigError);
    // Unknown key.
    CHECK_THROWS_AS(parse({"run", "--procedure", "st", "--model", "gaussian", "--theta",
                           "2", "--n", "64", "--s", "4", "--m", "4", "--seed", "1",
                           "--frobnicate", "9"}),
                    ConfigError);
    // Missing seed in run mode.
    CHECK_THROWS_AS(parse({"run", "--procedure", "st", "--model", "gaussian", "--theta",
                           "2", "--n", "64", "--s", "4", "--m", "4"}),
                    ConfigError);
    // Model parameter mismatch.
    CHECK_THROWS_AS(parse({"bounds", "--model", "gaussian", "--theta", "2", "--p0",
                           "0.2", "--n", "64", "--s", "4"}),
                    ConfigError);
    // sprt wants either targets or explicit boundaries, not both.
    CHECK_THROWS_AS(parse({"run", "--procedure", "sprt", "--model", "gaussian",
                           "--theta", "2", "--n", "64", "--s", "4", "--seed", "1",
                           "--alpha-target", "0.01", "--beta-target", "0.01",
                           "--sprt-a", "-2", "--sprt-b", "2"}),
                    ConfigError);
    // seed is rejected where no randomness exists.
    CHECK_THROWS_AS(parse({"bounds", "--model", "gaussian", "--theta", "2", "--n", "64",
                           "--s", "4", "--seed", "1"}),
                    ConfigError);
    // sweep refuses a single m.
    CHECK_THROWS_AS(parse({"sweep", "--procedure", "st", "--model", "gaussian",
                           "--theta", "1", "--n", "64", "--s", "4", "--m", "4",
                           "--seed", "1"}),
                    ConfigError);
    CHECK_THROWS_AS(parse({"sweep", "--procedure", "st", "--model", "gaussian",
                           "--theta", "1", "--n", "64", "--s", "4", "--m-grid",
                           "8,4,2", "--seed", "1"}),
                    ConfigError);
    CHECK_THROWS_AS(parse({"oracle", "--procedure", "fixed", "--model", "gaussian",
                           "--theta", "1", "--n", "4", "--s", "1", "--m", "2",
                           "--gamma", "0"}),
                    ConfigError);
    CHECK_THROWS_AS(parse({"frobnicate"}), ConfigError);
}

TEST_CASE("parse: config file merges under flags") {
    std::string path = write_temp_config(
        "# experiment defaults\n"
        "model = gaussian\n"
        "theta = 2\n"
        "n = 100\n"
        "s = 4\n"
        "m = 4\n"
        "seed = 11\n");
    auto c = parse({"run", "--procedure", "st", "--config", path, "--n", "200"});
    CHECK(*c.n == 200);  // flag wins
    CHECK(*c.s == 4);    // file survives
    CHECK(*c.seed == 11);
    std::filesystem::remove(path);

    std::string bad = write_temp_config("model = gaussian\nbogus = 1\n");
    CHECK_THROWS_AS(parse({"run", "--procedure", "st", "--config", bad}), ConfigError);
    std::filesystem::remove(bad);

    CHECK_THROWS_AS(parse({"run", "--config", "/nonexistent/seqrec.cfg"}), IoError);
}

TEST_CASE("resolved config text round-trips") {
    auto c = parse({"sweep", "--procedure", "st", "--model", "gaussian", "--theta", "1",
                    "--n", "4096", "--s", "8", "--m-grid", "2,4,8,16", "--rho", "0.72",
                    "--K", "10", "--trials", "500", "--seed", "1", "--out", "x.csv",
                    "--format", "csv"});
    std::string text = resolved_config_text(c);
    RunConfig replay;
    apply_config_text(replay, text);
    finalize(replay);
    CHECK(resolved_config_text(replay) == text);

    // Same round trip through an sprt run with targets.
    auto sprt = parse({"run", "--procedure", "sprt", "--model", "bernoulli", "--p0",
                       "0.2", "--p1", "0.8", "--n", "64", "--s", "4", "--seed", "9",
                       "--alpha-target", "0.01", "--beta-target", "0.02"});
    std::string sprt_text = resolved_config_text(sprt);
    RunConfig sprt_replay;
    apply_config_text(sprt_replay, sprt_text);
    finalize(sprt_replay);
    CHECK(resolved_config_text(sprt_replay) == sprt_text);
    CHECK(sprt_text.find("max-steps") != std::string::npos);  // default resolved
}

TEST_CASE("csv emission: schema, significant digits, empty cells") {
    ResultRecord r;
    r.procedure = "st";
    r.n = 64;
    r.s = 4;
    r.m = 4;
    r.rho = 0.5;
    r.passes = 6;
    r.trials = 500;
    r.seed = 1;
    r.alpha_hat = 0.123456789123;
    r.fwer_hat = 0.25;
    r.avg_meas_per_dim = 7.0;

    std::ostringstream out;
    emit_csv(out, std::vector<ResultRecord>{r}, "subcommand = run\nseed = 1\n");
    std::istringstream lines(out.str());
    std::string line;

    std::getline(lines, line);
    CHECK(line == "# subcommand = run");
    std::getline(lines, line);
    CHECK(line == "# seed = 1");

    std::getline(lines, line);
    std::vector<std::string> header;
    {
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) header.push_back(cell);
    }
    std::vector<std::string> expected{
        "procedure", "n", "s", "m", "rho", "K", "trials", "seed",
        "alpha_hat", "alpha_se", "beta_hat", "beta_se", "fwer_hat", "fwer_se",
        "avg_meas_per_dim", "seq_lower_m", "st_sufficient_m", "nonseq_lower_m"};
    CHECK(header == expected);

    std::getline(lines, line);
    CHECK(line ==
          "st,64,4,4,0.5,6,500,1,0.123456789,,,,0.25,,7,,,");

    // Zero records: header only.
    std::ostringstream empty;
    emit_csv(empty, std::vector<ResultRecord>{}, "");
    std::string empty_out = empty.str();
    CHECK(empty_out.find("procedure,") == 0);
    CHECK(empty_out.find('\n') == empty_out.size() - 1);
}

TEST_CASE("text emission carries the bound-only fields") {
    BoundReport report{1.0, 2.0, 3.0, 4.0, 0.25, 2.0, 2.0};
    auto record = record_from_bounds(report, 100, 10);
    std::ostringstream out;
    emit_text(out, std::vector<ResultRecord>{record}, "");
    std::string text = out.str();
    CHECK(text.find("procedure = bounds") != std::string::npos);
    CHECK(text.find("chernoff_minmax_m = 4") != std::string::npos);
    CHECK(text.find("lambda_star = 0.25") != std::string::npos);
    CHECK(text.find("seq_lower_m = 1") != std::string::npos);
}

TEST_CASE("format_real renders nine significant digits") {
    CHECK(format_real(0.123456789123) == "0.123456789");
    CHECK(format_real(2.302585092994046) == "2.30258509");
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_real(-1.0 / 0.0) == "-inf");
}

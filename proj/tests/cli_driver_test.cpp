// Drives the built seqrec binary end to end: exit codes, stdout payloads and
// the file outputs. The binary path is injected by the build.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void check(bool ok, const std::string& label) {
    if (ok) {
        std::cout << "ok: " << label << '\n';
    } else {
        std::cout << "FAILED: " << label << '\n';
        ++failures;
    }
}

struct CommandResult {
    int exit_code;
    std::string output;  // stdout only
};

CommandResult run_cli(const std::string& args) {
    std::string command = std::string(SEQREC_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string output;
    char buffer[4096];
    std::size_t got;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, got);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    std::ostringstream out;
    out << file.rdbuf();
    return out.str();
}

} // namespace

int main() {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "seqrec_cli_test";
    fs::create_directories(dir);

    // No arguments: usage text, nonzero exit.
    check(run_cli("").exit_code == 2, "empty invocation exits with the config code");

    // bounds to stdout, text format.
    auto bounds = run_cli(
        "bounds --model gaussian --theta 2 --n 10000 --s 10 --format text");
    check(bounds.exit_code == 0, "bounds succeeds");
    check(bounds.output.find("seq_lower_m = 1.15129255") != std::string::npos,
          "bounds reports log(s)/d01");
    check(bounds.output.find("chernoff_minmax_m = ") != std::string::npos,
          "bounds reports the min-max bound");
    check(bounds.output.find("# subcommand = bounds") != std::string::npos,
          "resolved config echoed");

    // Config errors: distinct code, named messages.
    check(run_cli("run --procedure st --model gaussian --theta 2 --n 64 --s 4 "
                  "--m 4 --seed 1 --rho 0.3")
                  .exit_code == 2,
          "out-of-range rho exits with the config code");
    check(run_cli("run --procedure fixed --model gaussian --theta 2 --n 64 --s 4 "
                  "--m 4 --gamma 0 --seed 1 --rho 0.6")
                  .exit_code == 2,
          "rho with procedure=fixed exits with the config code");
    check(run_cli("run --nonsense 1").exit_code == 2, "unknown key exits with the config code");

    // Domain error: targets inside (0,1) that still give degenerate Wald
    // boundaries pass the config layer and fail in the library.
    check(run_cli("run --procedure sprt --model gaussian --theta 2 --n 64 --s 4 "
                  "--seed 1 --alpha-target 0.7 --beta-target 0.6")
                  .exit_code == 3,
          "degenerate sprt targets exit with the domain code");

    // I/O error: unwritable output path.
    check(run_cli("bounds --model gaussian --theta 2 --n 100 --s 5 "
                  "--out /nonexistent-dir/x.csv")
                  .exit_code == 4,
          "unwritable destination exits with the io code");

    // Oracle overflow refusal.
    check(run_cli("oracle --procedure sprt --model bernoulli --p0 0.2 --p1 0.8 "
                  "--n 4 --s 1 --sprt-a -2 --sprt-b 2 --max-steps 100000 "
                  "--max-states 1000")
                  .exit_code == 5,
          "oracle overflow exits with the refusal code");

    // Oracle payload: the 4-outcome fixed-sample case.
    auto oracle = run_cli(
        "oracle --procedure fixed --model bernoulli --p0 0.2 --p1 0.8 --n 4 --s 1 "
        "--m 2 --gamma 0 --format text");
    check(oracle.exit_code == 0, "oracle succeeds");
    check(oracle.output.find("alpha_hat = 0.04") != std::string::npos,
          "oracle alpha exact");
    check(oracle.output.find("beta_hat = 0.36") != std::string::npos,
          "oracle beta exact");

    // run: CSV to file with header and one data row.
    fs::path run_csv = dir / "run.csv";
    auto run = run_cli("run --procedure st --model gaussian --theta 2 --n 128 --s 4 "
                       "--m 4 --K 5 --trials 50 --seed 9 --out " + run_csv.string());
    check(run.exit_code == 0, "run succeeds");
    {
        std::string text = slurp(run_csv);
        check(text.find("procedure,n,s,m,rho,K,trials,seed,alpha_hat") !=
                  std::string::npos,
              "run csv has the fixed header");
        check(text.find("\nst,128,4,4,0.5,5,50,9,") != std::string::npos,
              "run csv row echoes the configuration");
    }

    // sweep: five grid points, five data rows, m strictly increasing.
    fs::path sweep_csv = dir / "sweep.csv";
    auto sweep = run_cli(
        "sweep --procedure st --model gaussian --theta 1 --n 128 --s 4 "
        "--m-grid 2,3,4,6,8 --K 5 --trials 30 --seed 4 --out " + sweep_csv.string());
    check(sweep.exit_code == 0, "sweep succeeds");
    {
        std::ifstream file(sweep_csv);
        std::string line;
        int data_rows = 0;
        int last_m = 0;
        bool increasing = true;
        bool seen_header = false;
        while (std::getline(file, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!seen_header) {
                seen_header = true;
                continue;
            }
            ++data_rows;
            // m is the fourth column.
            std::istringstream cells(line);
            std::string cell;
            for (int i = 0; i < 4; ++i) std::getline(cells, cell, ',');
            int m = std::stoi(cell);
            if (m <= last_m) increasing = false;
            last_m = m;
        }
        check(data_rows == 5, "sweep emits one row per grid point");
        check(increasing, "sweep rows ascend in m");
    }

    // audit: report text contains the verdict keys.
    auto audit = run_cli(
        "audit --model gaussian --theta 2 --n 256 --s 4 --m 8 --K 8 --trials 50 "
        "--seed 6");
    check(audit.exit_code == 0, "audit succeeds");
    check(audit.output.find("audit_pass = ") != std::string::npos,
          "audit reports a verdict");
    check(audit.output.find("margin = ") != std::string::npos, "audit reports the margin");

    // Determinism: same seed, different worker counts, byte-identical files.
    fs::path det = dir / "det.csv";
    run_cli("run --procedure st --model gaussian --theta 2 --n 256 --s 8 --m 4 "
            "--trials 100 --seed 31 --workers 1 --out " + det.string());
    std::string bytes_one = slurp(det);
    run_cli("run --procedure st --model gaussian --theta 2 --n 256 --s 8 --m 4 "
            "--trials 100 --seed 31 --workers 6 --out " + det.string());
    std::string bytes_many = slurp(det);
    check(!bytes_one.empty() && bytes_one == bytes_many,
          "worker count never changes the output bytes");

    std::error_code ec;
    fs::remove_all(dir, ec);
    if (failures == 0) {
        std::cout << "all cli checks passed\n";
        return 0;
    }
    std::cout << failures << " cli checks failed\n";
    return 1;
}

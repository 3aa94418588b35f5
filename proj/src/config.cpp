#include "seqrec/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "seqrec/report.hpp"

namespace seqrec {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw ConfigError("invalid value '" + value + "' for --" + key);
}

double parse_double(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') bad_value(key, value);
    return v;
}

long long parse_ll(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0') bad_value(key, value);
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    long long v = parse_ll(key, value);
    if (v < 0) bad_value(key, value);
    return static_cast<std::uint64_t>(v);
}

std::uint32_t parse_u32(const std::string& key, const std::string& value) {
    long long v = parse_ll(key, value);
    if (v < 0 || v > 0xffffffffll) bad_value(key, value);
    return static_cast<std::uint32_t>(v);
}

int parse_int(const std::string& key, const std::string& value) {
    long long v = parse_ll(key, value);
    if (v < -0x80000000ll || v > 0x7fffffffll) bad_value(key, value);
    return static_cast<int>(v);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::istringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item.empty()) bad_value(key, value);
        out.push_back(parse_int(key, item));
    }
    if (out.empty()) bad_value(key, value);
    return out;
}

[[noreturn]] void not_for_subcommand(const std::string& key, const std::string& sub) {
    throw ConfigError("--" + key + " is not valid for subcommand '" + sub + "'");
}

[[noreturn]] void not_for_procedure(const std::string& key, const std::string& proc) {
    throw ConfigError("--" + key + " is not valid with procedure '" + proc + "'");
}

[[noreturn]] void missing(const std::string& key, const std::string& context) {
    throw ConfigError("missing required --" + key + " for " + context);
}

} // namespace

void apply_config_key(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "subcommand") {
        if (!c.subcommand.empty() && c.subcommand != value) {
            throw ConfigError("subcommand '" + value +
                              "' in config conflicts with '" + c.subcommand + "'");
        }
        c.subcommand = value;
    } else if (key == "model") {
        c.model = value;
    } else if (key == "theta") {
        c.theta = parse_double(key, value);
    } else if (key == "p0") {
        c.p0 = parse_double(key, value);
    } else if (key == "p1") {
        c.p1 = parse_double(key, value);
    } else if (key == "n") {
        c.n = parse_u32(key, value);
    } else if (key == "s") {
        c.s = parse_u32(key, value);
    } else if (key == "m") {
        c.m = parse_int(key, value);
    } else if (key == "m-grid") {
        c.m_grid = parse_int_list(key, value);
    } else if (key == "rho") {
        c.rho = parse_double(key, value);
    } else if (key == "K") {
        c.passes = parse_int(key, value);
    } else if (key == "trials") {
        c.trials = parse_u64(key, value);
    } else if (key == "seed") {
        c.seed = parse_u64(key, value);
    } else if (key == "procedure") {
        c.procedure = value;
    } else if (key == "alpha-target") {
        c.alpha_target = parse_double(key, value);
    } else if (key == "beta-target") {
        c.beta_target = parse_double(key, value);
    } else if (key == "sprt-a") {
        c.sprt_a = parse_double(key, value);
    } else if (key == "sprt-b") {
        c.sprt_b = parse_double(key, value);
    } else if (key == "max-steps") {
        c.max_steps = parse_u64(key, value);
    } else if (key == "gamma") {
        c.gamma = parse_double(key, value);
    } else if (key == "tolerance") {
        c.tolerance = parse_double(key, value);
    } else if (key == "max-states") {
        c.max_states = parse_u64(key, value);
    } else if (key == "out") {
        c.out = value;
    } else if (key == "format") {
        c.format = value;
    } else if (key == "workers") {
        int w = parse_int(key, value);
        if (w < 1) bad_value(key, value);
        c.workers = static_cast<unsigned>(w);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

void apply_config_text(RunConfig& config, const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("malformed config line (expected key = value): " + t);
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("malformed config line (empty key): " + t);
        apply_config_key(config, key, value);
    }
}

namespace {

void check_model(const RunConfig& c) {
    if (!c.model) missing("model", "every subcommand");
    if (*c.model == "gaussian") {
        if (c.p0 || c.p1) {
            throw ConfigError("--p0/--p1 are only valid with model 'bernoulli'");
        }
        if (!c.theta) missing("theta", "model 'gaussian'");
        if (!(*c.theta > 0.0)) throw ConfigError("--theta must be > 0");
    } else if (*c.model == "bernoulli") {
        if (c.theta) throw ConfigError("--theta is only valid with model 'gaussian'");
        if (!c.p0) missing("p0", "model 'bernoulli'");
        if (!c.p1) missing("p1", "model 'bernoulli'");
        if (!(*c.p0 > 0.0 && *c.p0 < 1.0)) {
            throw ConfigError("--p0 must lie strictly inside (0,1)");
        }
        if (!(*c.p1 > 0.0 && *c.p1 < 1.0)) {
            throw ConfigError("--p1 must lie strictly inside (0,1)");
        }
        if (*c.p0 == *c.p1) throw ConfigError("--p0 and --p1 must differ");
    } else {
        throw ConfigError("unknown model '" + *c.model + "' (expected gaussian|bernoulli)");
    }
}

double resolved_d01(const RunConfig& c) {
    if (*c.model == "gaussian") return 0.5 * *c.theta * *c.theta;
    double p0 = *c.p0, p1 = *c.p1;
    return p0 * std::log(p0 / p1) + (1.0 - p0) * std::log((1.0 - p0) / (1.0 - p1));
}

void check_rho(const RunConfig& c) {
    if (c.rho && !(*c.rho >= 0.5 && *c.rho < 1.0)) {
        throw ConfigError("--rho must lie in [1/2, 1)");
    }
}

void check_sprt_spec(RunConfig& c) {
    bool targets = c.alpha_target || c.beta_target;
    bool explicit_bounds = c.sprt_a || c.sprt_b;
    if (targets && explicit_bounds) {
        throw ConfigError(
            "specify either --alpha-target/--beta-target or --sprt-a/--sprt-b, not both");
    }
    if (targets) {
        if (!c.alpha_target) missing("alpha-target", "procedure 'sprt'");
        if (!c.beta_target) missing("beta-target", "procedure 'sprt'");
        if (!(*c.alpha_target > 0.0 && *c.alpha_target < 1.0)) {
            throw ConfigError("--alpha-target must lie in (0,1)");
        }
        if (!(*c.beta_target > 0.0 && *c.beta_target < 1.0)) {
            throw ConfigError("--beta-target must lie in (0,1)");
        }
    } else if (explicit_bounds) {
        if (!c.sprt_a) missing("sprt-a", "procedure 'sprt'");
        if (!c.sprt_b) missing("sprt-b", "procedure 'sprt'");
        if (!(*c.sprt_a < 0.0 && *c.sprt_b > 0.0)) {
            throw ConfigError("--sprt-a/--sprt-b must satisfy A < 0 < B");
        }
    } else {
        throw ConfigError(
            "procedure 'sprt' requires --alpha-target/--beta-target or --sprt-a/--sprt-b");
    }
    if (!c.max_steps) {
        c.max_steps = [&] {
            double d01 = resolved_d01(c);
            double steps = std::ceil(std::log(static_cast<double>(*c.n)) / d01);
            if (steps < 1.0) steps = 1.0;
            return 100ull * static_cast<std::uint64_t>(steps);
        }();
    }
}

void reject_st_keys(const RunConfig& c, const std::string& proc) {
    if (c.rho) not_for_procedure("rho", proc);
    if (c.passes) not_for_procedure("K", proc);
}

void reject_sprt_keys(const RunConfig& c, const std::string& proc) {
    if (c.alpha_target) not_for_procedure("alpha-target", proc);
    if (c.beta_target) not_for_procedure("beta-target", proc);
    if (c.sprt_a) not_for_procedure("sprt-a", proc);
    if (c.sprt_b) not_for_procedure("sprt-b", proc);
    if (c.max_steps) not_for_procedure("max-steps", proc);
}

void finalize_procedure(RunConfig& c, bool sweep_mode) {
    if (!c.procedure) missing("procedure", "subcommand '" + c.subcommand + "'");
    const std::string& proc = *c.procedure;
    if (proc == "st") {
        reject_sprt_keys(c, proc);
        if (!sweep_mode && !c.m) missing("m", "procedure 'st'");
        if (!c.rho) c.rho = 0.5;
        check_rho(c);
        if (!c.passes) c.passes = static_cast<int>(std::ceil(std::log(*c.n)));
        if (*c.passes < 1) throw ConfigError("--K must be >= 1");
    } else if (proc == "sprt") {
        if (sweep_mode) {
            throw ConfigError("sweep supports procedures 'st' and 'fixed' only");
        }
        reject_st_keys(c, proc);
        if (c.m) not_for_procedure("m", proc);
        if (c.gamma) not_for_procedure("gamma", proc);
        check_sprt_spec(c);
    } else if (proc == "fixed") {
        reject_st_keys(c, proc);
        reject_sprt_keys(c, proc);
        if (!sweep_mode && !c.m) missing("m", "procedure 'fixed'");
        if (!c.gamma) missing("gamma", "procedure 'fixed'");
    } else {
        throw ConfigError("unknown procedure '" + proc + "' (expected st|sprt|fixed)");
    }
    if (c.m && *c.m < 1) throw ConfigError("--m must be >= 1");
}

} // namespace

void finalize(RunConfig& c) {
    if (c.subcommand.empty()) throw ConfigError("missing subcommand");
    const std::string& sub = c.subcommand;
    if (sub != "bounds" && sub != "run" && sub != "sweep" && sub != "audit" &&
        sub != "oracle") {
        throw ConfigError("unknown subcommand '" + sub +
                          "' (expected bounds|run|sweep|audit|oracle)");
    }
    if (c.format != "csv" && c.format != "text") {
        throw ConfigError("unknown format '" + c.format + "' (expected csv|text)");
    }

    check_model(c);
    if (!c.n) missing("n", "subcommand '" + sub + "'");
    if (!c.s) missing("s", "subcommand '" + sub + "'");
    if (*c.n < 1) throw ConfigError("--n must be >= 1");
    if (*c.s > *c.n) throw ConfigError("--s must satisfy s <= n");

    if (sub == "bounds") {
        if (*c.n < 3) throw ConfigError("--n must be >= 3 for subcommand 'bounds'");
        if (*c.s < 2 || *c.s >= *c.n) {
            throw ConfigError("--s must satisfy 2 <= s < n for subcommand 'bounds'");
        }
        if (c.m) not_for_subcommand("m", sub);
        if (!c.m_grid.empty()) not_for_subcommand("m-grid", sub);
        if (c.rho) not_for_subcommand("rho", sub);
        if (c.passes) not_for_subcommand("K", sub);
        if (c.trials) not_for_subcommand("trials", sub);
        if (c.seed) not_for_subcommand("seed", sub);
        if (c.procedure) not_for_subcommand("procedure", sub);
        if (c.alpha_target) not_for_subcommand("alpha-target", sub);
        if (c.beta_target) not_for_subcommand("beta-target", sub);
        if (c.sprt_a) not_for_subcommand("sprt-a", sub);
        if (c.sprt_b) not_for_subcommand("sprt-b", sub);
        if (c.max_steps) not_for_subcommand("max-steps", sub);
        if (c.gamma) not_for_subcommand("gamma", sub);
        if (c.tolerance) not_for_subcommand("tolerance", sub);
        if (c.max_states) not_for_subcommand("max-states", sub);
        return;
    }

    if (sub == "run" || sub == "sweep") {
        if (c.tolerance) not_for_subcommand("tolerance", sub);
        if (c.max_states) not_for_subcommand("max-states", sub);
        if (sub == "run") {
            if (!c.m_grid.empty()) not_for_subcommand("m-grid", sub);
        } else {
            if (c.m) throw ConfigError("--m is not valid for 'sweep'; use --m-grid");
            if (c.m_grid.empty()) missing("m-grid", "subcommand 'sweep'");
            for (std::size_t i = 0; i < c.m_grid.size(); ++i) {
                if (c.m_grid[i] < 1) throw ConfigError("--m-grid entries must be >= 1");
                if (i > 0 && c.m_grid[i] <= c.m_grid[i - 1]) {
                    throw ConfigError("--m-grid must be strictly increasing");
                }
            }
        }
        finalize_procedure(c, sub == "sweep");
        if (!c.trials) c.trials = 500;
        if (*c.trials < 1) throw ConfigError("--trials must be >= 1");
        if (!c.seed) missing("seed", "subcommand '" + sub + "'");
        return;
    }

    if (sub == "audit") {
        if (c.procedure && *c.procedure != "st") {
            throw ConfigError("subcommand 'audit' applies to procedure 'st' only");
        }
        c.procedure = "st";
        if (!c.m_grid.empty()) not_for_subcommand("m-grid", sub);
        if (c.alpha_target) not_for_subcommand("alpha-target", sub);
        if (c.beta_target) not_for_subcommand("beta-target", sub);
        if (c.sprt_a) not_for_subcommand("sprt-a", sub);
        if (c.sprt_b) not_for_subcommand("sprt-b", sub);
        if (c.max_steps) not_for_subcommand("max-steps", sub);
        if (c.max_states) not_for_subcommand("max-states", sub);
        if (!c.m) missing("m", "subcommand 'audit'");
        if (*c.m < 1) throw ConfigError("--m must be >= 1");
        if (!c.rho) c.rho = 0.5;
        check_rho(c);
        if (!c.passes) c.passes = static_cast<int>(std::ceil(std::log(*c.n)));
        if (*c.passes < 1) throw ConfigError("--K must be >= 1");
        if (!c.trials) c.trials = 200;
        if (*c.trials < 1) throw ConfigError("--trials must be >= 1");
        if (!c.seed) missing("seed", "subcommand 'audit'");
        if (!c.tolerance) c.tolerance = 0.02;
        if (*c.tolerance < 0.0) throw ConfigError("--tolerance must be >= 0");
        return;
    }

    // oracle
    if (*c.model != "bernoulli") {
        throw ConfigError("subcommand 'oracle' requires --model bernoulli");
    }
    if (c.trials) not_for_subcommand("trials", sub);
    if (c.seed) not_for_subcommand("seed", sub);
    if (c.tolerance) not_for_subcommand("tolerance", sub);
    if (!c.m_grid.empty()) not_for_subcommand("m-grid", sub);
    finalize_procedure(c, false);
    if (!c.max_states) c.max_states = 1ull << 24;
}

RunConfig parse_command_line(int argc, const char* const* argv) {
    if (argc < 2) throw ConfigError("missing subcommand");
    RunConfig config;
    config.subcommand = argv[1];

    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 2; i < argc; ++i) {
        std::string token = argv[i];
        if (token.rfind("--", 0) != 0 || token.size() <= 2) {
            throw ConfigError("unexpected argument '" + token + "' (expected --key value)");
        }
        std::string key = token.substr(2);
        std::string value;
        std::size_t eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= argc) throw ConfigError("missing value for --" + key);
            value = argv[++i];
        }
        pairs.emplace_back(std::move(key), std::move(value));
    }

    // Config file first (flags override).
    for (const auto& [key, value] : pairs) {
        if (key != "config") continue;
        std::ifstream file(value);
        if (!file) throw IoError("cannot read config file '" + value + "'");
        std::ostringstream text;
        text << file.rdbuf();
        apply_config_text(config, text.str());
    }
    for (const auto& [key, value] : pairs) {
        if (key == "config") continue;
        apply_config_key(config, key, value);
    }
    finalize(config);
    return config;
}

std::string resolved_config_text(const RunConfig& c) {
    std::ostringstream out;
    auto put = [&](const char* key, const std::string& value) {
        out << key << " = " << value << '\n';
    };
    put("subcommand", c.subcommand);
    if (c.model) put("model", *c.model);
    if (c.theta) put("theta", format_real(*c.theta));
    if (c.p0) put("p0", format_real(*c.p0));
    if (c.p1) put("p1", format_real(*c.p1));
    if (c.n) put("n", std::to_string(*c.n));
    if (c.s) put("s", std::to_string(*c.s));
    if (c.procedure) put("procedure", *c.procedure);
    if (c.m) put("m", std::to_string(*c.m));
    if (!c.m_grid.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < c.m_grid.size(); ++i) {
            if (i > 0) joined += ',';
            joined += std::to_string(c.m_grid[i]);
        }
        put("m-grid", joined);
    }
    if (c.rho) put("rho", format_real(*c.rho));
    if (c.passes) put("K", std::to_string(*c.passes));
    if (c.gamma) put("gamma", format_real(*c.gamma));
    if (c.alpha_target) put("alpha-target", format_real(*c.alpha_target));
    if (c.beta_target) put("beta-target", format_real(*c.beta_target));
    if (c.sprt_a) put("sprt-a", format_real(*c.sprt_a));
    if (c.sprt_b) put("sprt-b", format_real(*c.sprt_b));
    if (c.max_steps) put("max-steps", std::to_string(*c.max_steps));
    if (c.trials) put("trials", std::to_string(*c.trials));
    if (c.seed) put("seed", std::to_string(*c.seed));
    if (c.tolerance) put("tolerance", format_real(*c.tolerance));
    if (c.max_states) put("max-states", std::to_string(*c.max_states));
    put("out", c.out);
    put("format", c.format);
    return out.str();
}

std::string usage_text() {
    return
        "usage: seqrec <subcommand> [--key value ...]\n"
        "\n"
        "subcommands:\n"
        "  bounds   closed-form sample-complexity bounds for a model and (n, s)\n"
        "  run      Monte Carlo trials of one recovery procedure\n"
        "  sweep    run trials across an increasing grid of budgets m\n"
        "  audit    sequential-thresholding budget audit\n"
        "  oracle   exact error probabilities for small Bernoulli configurations\n"
        "\n"
        "model selection:\n"
        "  --model gaussian --theta T       f0 = N(0,1), f1 = N(T,1)\n"
        "  --model bernoulli --p0 P --p1 Q  f0 = Bernoulli(P), f1 = Bernoulli(Q)\n"
        "\n"
        "common keys:\n"
        "  --n N --s S                      dimension and sparsity\n"
        "  --procedure st|sprt|fixed        recovery procedure\n"
        "  --m M | --m-grid M1,M2,...       per-dimension budget (grid for sweep)\n"
        "  --rho R --K K                    st: elimination rate [1/2,1), passes\n"
        "  --gamma G                        fixed: threshold; st: gamma override\n"
        "  --alpha-target A --beta-target B sprt: Wald boundary targets\n"
        "  --sprt-a A --sprt-b B            sprt: explicit boundaries (A < 0 < B)\n"
        "  --max-steps N                    sprt: truncation horizon\n"
        "  --trials T --seed S              Monte Carlo size and master seed\n"
        "  --tolerance X                    audit: relative slack (default 0.02)\n"
        "  --max-states N                   oracle: enumeration state limit\n"
        "  --out PATH --format csv|text     output destination (default stdout csv)\n"
        "  --workers W                      worker threads (never changes results)\n"
        "  --config FILE                    flat key = value file; flags override\n"
        "\n"
        "examples:\n"
        "  seqrec bounds --model gaussian --theta 2 --n 10000 --s 10\n"
        "  seqrec run --procedure st --model gaussian --theta 2 --n 2048 --s 0 \\\n"
        "      --m 4 --rho 0.5 --K 8 --trials 500 --seed 1\n"
        "  seqrec sweep --procedure st --model gaussian --theta 1 --n 4096 --s 8 \\\n"
        "      --m-grid 2,4,8,16 --rho 0.72 --K 10 --trials 500 --seed 1 --out sweep.csv\n"
        "  seqrec oracle --procedure fixed --model bernoulli --p0 0.2 --p1 0.8 \\\n"
        "      --n 4 --s 1 --m 2 --gamma 0\n";
}

} // namespace seqrec

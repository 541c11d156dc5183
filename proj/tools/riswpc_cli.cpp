// Command-line front end: closed-form link evaluation, Monte Carlo
// simulation, parameter sweeps, and the analytic-vs-oracle validation suite.
// All numeric output is rendered with 10 significant digits so identical
// invocations produce byte-identical files.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riswpc/analytic.hpp"
#include "riswpc/experiment.hpp"
#include "riswpc/format.hpp"
#include "riswpc/montecarlo.hpp"
#include "riswpc/params.hpp"
#include "riswpc/validation.hpp"

namespace {

using nlohmann::json;
using riswpc::format_g10;
using riswpc::round_g10;
using riswpc::SystemParams;

constexpr const char* kCsvHeader =
    "variable,value,outage_analytic,rate_analytic,outage_mc,outage_mc_stderr,"
    "rate_mc,rate_mc_stderr,trials,seed";

struct ParamOptions {
    std::uint64_t m = 50;
    double pb_dbm = 10.0;
    double alpha = 0.4;
    double tau_c = 1.0;
    double eta = 0.85;
    double r = 1.2;
    double zeta = 1.0;
    double zeta_db = 0.0;
    bool zeta_db_set = false;
    double sigma2_dbm = -90.0;

    SystemParams build() const {
        SystemParams p;
        p.m = m;
        p.p_b_dbm = pb_dbm;
        p.alpha = alpha;
        p.tau_c = tau_c;
        p.eta = eta;
        p.r = r;
        p.zeta = zeta_db_set ? std::pow(10.0, zeta_db / 10.0) : zeta;
        p.sigma2_dbm = sigma2_dbm;
        p.validate();
        return p;
    }
};

struct McOptions {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t chunk_size = 8192;
    unsigned workers = 0;

    riswpc::mc::McConfig build() const { return {trials, seed, chunk_size, workers}; }
};

// Adds the shared link-parameter flags to a subcommand. Only --zeta is
// reported in the config file round trip; --zeta-db is an input convenience.
void add_param_options(CLI::App* cmd, ParamOptions& opts, bool pb_is_scalar,
                       std::vector<double>* pb_list = nullptr) {
    cmd->add_option("--m", opts.m, "Number of RIS elements")->capture_default_str();
    if (pb_is_scalar) {
        cmd->add_option("--pb-dbm", opts.pb_dbm, "BS transmit power, dBm")
            ->capture_default_str();
    } else {
        cmd->add_option("--pb-dbm", *pb_list,
                        "BS transmit power, dBm (comma list gives one curve per value)")
            ->delimiter(',')
            ->capture_default_str();
    }
    cmd->add_option("--alpha", opts.alpha,
                    "Energy-transfer fraction of the coherence interval, in (0,1)")
        ->capture_default_str();
    cmd->add_option("--tau-c", opts.tau_c, "Coherence interval, seconds")->capture_default_str();
    cmd->add_option("--eta", opts.eta, "Energy conversion efficiency, in (0,1]")
        ->capture_default_str();
    cmd->add_option("--r", opts.r, "Target codeword rate, bits/s/Hz")->capture_default_str();
    auto* zeta_opt = cmd->add_option("--zeta", opts.zeta,
                                     "One-hop cascaded path loss, linear power gain")
                         ->capture_default_str();
    cmd->add_option_function<double>(
           "--zeta-db",
           [&opts](double v) {
               opts.zeta_db = v;
               opts.zeta_db_set = true;
           },
           "One-hop cascaded path loss, dB")
        ->excludes(zeta_opt);
    cmd->add_option("--sigma2-dbm", opts.sigma2_dbm, "Noise variance at the BS, dBm")
        ->capture_default_str();
}

void add_mc_options(CLI::App* cmd, McOptions& opts, std::uint64_t default_trials,
                    bool with_trials = true) {
    opts.trials = default_trials;
    if (with_trials) {
        cmd->add_option("--trials", opts.trials, "Monte Carlo trials per estimate")
            ->capture_default_str();
    }
    cmd->add_option("--seed", opts.seed, "Master seed, 64-bit unsigned")->capture_default_str();
    cmd->add_option("--chunk-size", opts.chunk_size,
                    "Trials per deterministic Monte Carlo sub-stream")
        ->capture_default_str();
    cmd->add_option("--workers", opts.workers,
                    "Worker threads (0 = one per hardware thread); results do not depend on it")
        ->capture_default_str();
}

// Applies a flat key=value config file to a parsed subcommand. Keys are
// option names without the leading dashes; values for options already given
// on the command line are ignored, so flags take precedence.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream file(path);
    if (!file) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    auto trim = [](const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string entry = trim(line);
        if (entry.empty() || entry[0] == '#') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        " is not key=value: '" + entry + "'");
        }
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw std::invalid_argument("unknown config key '" + key + "' on line " +
                                        std::to_string(line_no));
        }
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    auto parse_value = [](const std::string& token) {
        std::size_t pos = 0;
        double v = std::stod(token, &pos);
        if (pos != token.size()) {
            throw std::invalid_argument("bad grid value '" + token + "'");
        }
        return v;
    };
    if (text.find(':') != std::string::npos) {
        const auto first = text.find(':');
        const auto second = text.find(':', first + 1);
        if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
            throw std::invalid_argument("grid range must be start:stop:step, got '" + text + "'");
        }
        const double start = parse_value(text.substr(0, first));
        const double stop = parse_value(text.substr(first + 1, second - first - 1));
        const double step = parse_value(text.substr(second + 1));
        if (!(step > 0.0) || stop < start) {
            throw std::invalid_argument("grid range requires stop >= start and step > 0");
        }
        for (double v = start; v <= stop + step * 1e-9; v += step) grid.push_back(v);
    } else {
        std::size_t begin = 0;
        while (begin <= text.size()) {
            const auto comma = text.find(',', begin);
            const auto end = comma == std::string::npos ? text.size() : comma;
            grid.push_back(parse_value(text.substr(begin, end - begin)));
            if (comma == std::string::npos) break;
            begin = comma + 1;
        }
    }
    if (grid.empty()) throw std::invalid_argument("grid is empty");
    return grid;
}

riswpc::experiment::SweepVariable parse_variable(std::string name) {
    for (char& c : name) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (c == '-') c = '_';
    }
    using SV = riswpc::experiment::SweepVariable;
    if (name == "m") return SV::elements;
    if (name == "pb_dbm" || name == "pb") return SV::pb_dbm;
    if (name == "alpha") return SV::alpha;
    if (name == "r") return SV::target_rate;
    if (name == "zeta") return SV::zeta;
    if (name == "sigma2_dbm" || name == "sigma2") return SV::sigma2_dbm;
    throw std::invalid_argument("unknown sweep variable '" + name +
                                "' (expected m, pb-dbm, alpha, r, zeta, or sigma2-dbm)");
}

json params_to_json(const SystemParams& p) {
    return json{{"m", p.m},
                {"pb_dbm", round_g10(p.p_b_dbm)},
                {"alpha", round_g10(p.alpha)},
                {"tau_c", round_g10(p.tau_c)},
                {"eta", round_g10(p.eta)},
                {"r", round_g10(p.r)},
                {"zeta", round_g10(p.zeta)},
                {"sigma2_dbm", round_g10(p.sigma2_dbm)}};
}

json estimate_to_json(const riswpc::mc::McEstimate& est) {
    json j{{"mean", round_g10(est.mean)},
           {"std_err", round_g10(est.std_err)},
           {"ci95_low", round_g10(est.ci95_low)},
           {"ci95_high", round_g10(est.ci95_high)},
           {"trials", est.trials},
           {"seed", est.seed}};
    if (est.wilson) {
        j["wilson_low"] = round_g10(est.wilson->low);
        j["wilson_high"] = round_g10(est.wilson->high);
    }
    return j;
}

// One line of the fixed 10-column CSV schema. Absent Monte Carlo fields stay
// empty: zero is a meaningful outage value.
std::string csv_row(const std::string& variable, const std::optional<double>& value,
                    double outage_analytic, double rate_analytic,
                    const std::optional<riswpc::mc::McEstimate>& outage_mc,
                    const std::optional<riswpc::mc::McEstimate>& rate_mc) {
    std::string row = variable;
    row += ',';
    if (value) row += format_g10(*value);
    row += ',';
    row += format_g10(outage_analytic);
    row += ',';
    row += format_g10(rate_analytic);
    row += ',';
    if (outage_mc) row += format_g10(outage_mc->mean);
    row += ',';
    if (outage_mc) row += format_g10(outage_mc->std_err);
    row += ',';
    if (rate_mc) row += format_g10(rate_mc->mean);
    row += ',';
    if (rate_mc) row += format_g10(rate_mc->std_err);
    row += ',';
    if (outage_mc) row += std::to_string(outage_mc->trials);
    row += ',';
    if (outage_mc) row += std::to_string(outage_mc->seed);
    row += '\n';
    return row;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file '" + out_path + "'");
    }
    file << content;
}

int run_analytic(const ParamOptions& popts, bool time_fraction, const std::string& format,
                 const std::string& out_path) {
    const SystemParams p = popts.build();
    const double outage = riswpc::analytic::outage_probability(p);
    const double rate = riswpc::analytic::ergodic_rate(p, time_fraction);
    std::string content;
    if (format == "csv") {
        content = std::string(kCsvHeader) + "\n" +
                  csv_row("", std::nullopt, outage, rate, std::nullopt, std::nullopt);
    } else {
        json record{{"params", params_to_json(p)},
                    {"outage_analytic", round_g10(outage)},
                    {"outage_analytic_log10",
                     round_g10(riswpc::analytic::log_outage_probability(p) / std::numbers::ln10)},
                    {"rate_analytic", round_g10(rate)}};
        content = record.dump(2) + "\n";
    }
    write_output(out_path, content);
    return 0;
}

int run_simulate(const ParamOptions& popts, const McOptions& mopts, bool time_fraction,
                 const std::string& format, const std::string& out_path) {
    const SystemParams p = popts.build();
    const riswpc::mc::McConfig mc = mopts.build();
    const double outage = riswpc::analytic::outage_probability(p);
    const double rate = riswpc::analytic::ergodic_rate(p, time_fraction);
    const riswpc::mc::McEstimate outage_mc = riswpc::mc::simulate_outage(p, mc);
    const riswpc::mc::McEstimate rate_mc = riswpc::mc::simulate_rate(p, mc, time_fraction);
    std::string content;
    if (format == "csv") {
        content = std::string(kCsvHeader) + "\n" +
                  csv_row("", std::nullopt, outage, rate, outage_mc, rate_mc);
    } else {
        json record{{"params", params_to_json(p)},
                    {"outage_analytic", round_g10(outage)},
                    {"rate_analytic", round_g10(rate)},
                    {"outage_mc", estimate_to_json(outage_mc)},
                    {"rate_mc", estimate_to_json(rate_mc)},
                    {"trials", mc.trials},
                    {"seed", mc.seed}};
        content = record.dump(2) + "\n";
    }
    write_output(out_path, content);
    return 0;
}

int run_sweep(const ParamOptions& popts, std::vector<double> pb_list, bool pb_given,
              const McOptions& mopts, std::uint64_t trials, const std::string& var_token,
              const std::string& grid_text, bool time_fraction, const std::string& format,
              const std::string& out_path) {
    const auto variable = parse_variable(var_token);
    if (variable == riswpc::experiment::SweepVariable::pb_dbm) {
        if (pb_given && pb_list.size() > 1) {
            throw std::invalid_argument("sweeping pb-dbm excludes a multi-valued --pb-dbm list");
        }
        pb_list = {popts.pb_dbm}; // placeholder; the grid sets the power per row
    }

    riswpc::experiment::SweepSpec spec;
    spec.variable = variable;
    spec.grid = parse_grid(grid_text);
    spec.rate_time_fraction = time_fraction;
    if (trials > 0) {
        riswpc::mc::McConfig mc = mopts.build();
        mc.trials = trials;
        spec.mc = mc;
    }

    std::string csv;
    json curves = json::array();
    for (double pb : pb_list) {
        ParamOptions curve_opts = popts;
        curve_opts.pb_dbm = pb;
        spec.base = curve_opts.build();
        const auto rows = riswpc::experiment::run_sweep(spec);
        if (format == "csv") {
            if (pb_list.size() > 1) csv += "# pb_dbm=" + format_g10(pb) + "\n";
            csv += kCsvHeader;
            csv += '\n';
            for (const auto& row : rows) {
                csv += csv_row(riswpc::experiment::variable_name(variable), row.value,
                               row.outage_analytic, row.rate_analytic, row.outage_mc,
                               row.rate_mc);
            }
        } else {
            json rows_json = json::array();
            for (const auto& row : rows) {
                json rj{{"value", round_g10(row.value)},
                        {"outage_analytic", round_g10(row.outage_analytic)},
                        {"rate_analytic", round_g10(row.rate_analytic)}};
                if (row.outage_mc) rj["outage_mc"] = estimate_to_json(*row.outage_mc);
                if (row.rate_mc) rj["rate_mc"] = estimate_to_json(*row.rate_mc);
                rows_json.push_back(std::move(rj));
            }
            curves.push_back(json{{"variable", riswpc::experiment::variable_name(variable)},
                                  {"base", params_to_json(spec.base)},
                                  {"rows", std::move(rows_json)}});
        }
    }
    write_output(out_path, format == "csv" ? csv : curves.dump(2) + "\n");
    return 0;
}

int run_validate(const McOptions& mopts, const std::string& out_path) {
    riswpc::validation::SuiteConfig cfg;
    cfg.trials = mopts.trials;
    cfg.seed = mopts.seed;
    cfg.chunk_size = mopts.chunk_size;
    cfg.workers = mopts.workers;
    const auto results = riswpc::validation::run_suite(cfg);
    std::string report;
    std::size_t passed = 0;
    for (const auto& check : results) {
        report += check.passed ? "[PASS] " : "[FAIL] ";
        report += check.name + ": " + check.detail + "\n";
        if (check.passed) ++passed;
    }
    report += "validate: " + std::to_string(passed) + "/" + std::to_string(results.size()) +
              " checks passed (trials=" + std::to_string(cfg.trials) +
              ", seed=" + std::to_string(cfg.seed) + ")\n";
    write_output(out_path, report);
    return passed == results.size() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted wireless-powered link: closed-form outage/rate and "
                 "seeded Monte Carlo verification"};
    app.require_subcommand(1);

    std::string format = "json";
    std::string out_path;
    std::string config_path;
    bool time_fraction = false;
    auto add_common = [&](CLI::App* cmd, bool with_format = true) {
        if (with_format) {
            cmd->add_option("--format", format, "Output format")
                ->check(CLI::IsMember({"csv", "json"}))
                ->capture_default_str();
        }
        cmd->add_option("--out", out_path, "Write results to this file instead of stdout");
        cmd->add_option("--config", config_path,
                        "Flat key=value config file; command-line flags take precedence");
    };

    ParamOptions analytic_params;
    auto* analytic_cmd =
        app.add_subcommand("analytic", "Closed-form outage probability and ergodic rate");
    add_param_options(analytic_cmd, analytic_params, true);
    analytic_cmd->add_flag("--rate-time-fraction", time_fraction,
                           "Scale rates by the (1-alpha) transmit-time fraction");
    add_common(analytic_cmd);

    ParamOptions simulate_params;
    McOptions simulate_mc;
    auto* simulate_cmd =
        app.add_subcommand("simulate", "Monte Carlo outage probability and mean rate");
    add_param_options(simulate_cmd, simulate_params, true);
    add_mc_options(simulate_cmd, simulate_mc, 1'000'000);
    simulate_cmd->add_flag("--rate-time-fraction", time_fraction,
                           "Scale rates by the (1-alpha) transmit-time fraction");
    add_common(simulate_cmd);

    ParamOptions sweep_params;
    std::vector<double> sweep_pb{10.0, 35.0};
    McOptions sweep_mc;
    std::uint64_t sweep_trials = 0;
    std::string sweep_var = "m";
    std::string sweep_grid = "10:100:10";
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Parameter sweep producing analytic (and optional Monte Carlo) tables");
    add_param_options(sweep_cmd, sweep_params, false, &sweep_pb);
    sweep_cmd->add_option("--var", sweep_var,
                          "Swept variable: m, pb-dbm, alpha, r, zeta, or sigma2-dbm")
        ->capture_default_str();
    sweep_cmd->add_option("--grid", sweep_grid, "Grid as start:stop:step or a comma list")
        ->capture_default_str();
    add_mc_options(sweep_cmd, sweep_mc, 0, false);
    sweep_cmd->add_option("--trials", sweep_trials,
                          "Monte Carlo trials per grid point (0 = analytic only)")
        ->capture_default_str();
    sweep_cmd->add_flag("--rate-time-fraction", time_fraction,
                        "Scale rates by the (1-alpha) transmit-time fraction");
    add_common(sweep_cmd);

    McOptions validate_mc;
    auto* validate_cmd = app.add_subcommand(
        "validate", "Run the analytic-vs-oracle suite; exit 0 only if every check passes");
    add_mc_options(validate_cmd, validate_mc, 1'000'000);
    add_common(validate_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (analytic_cmd->parsed()) {
            apply_config_file(analytic_cmd, config_path);
            return run_analytic(analytic_params, time_fraction, format, out_path);
        }
        if (simulate_cmd->parsed()) {
            apply_config_file(simulate_cmd, config_path);
            return run_simulate(simulate_params, simulate_mc, time_fraction, format, out_path);
        }
        if (sweep_cmd->parsed()) {
            apply_config_file(sweep_cmd, config_path);
            const bool pb_given = sweep_cmd->get_option("--pb-dbm")->count() > 0;
            return run_sweep(sweep_params, sweep_pb, pb_given, sweep_mc, sweep_trials,
                             sweep_var, sweep_grid, time_fraction, format, out_path);
        }
        apply_config_file(validate_cmd, config_path);
        return run_validate(validate_mc, out_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "run with --help for usage\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

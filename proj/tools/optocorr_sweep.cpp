// Sweep driver: evaluates Renyi-2 entanglement/discord over a parameter grid
// and writes CSV (and optionally SVG panels), or verifies the closed forms
// against the dynamical and measurement oracles.
//
// Exit codes: 0 success, 1 validation failure, 2 verification failure,
// 3 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "optocorr/config.hpp"
#include "optocorr/plot.hpp"
#include "optocorr/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kVerifyFailed = 2;
constexpr int kRuntime = 3;

std::vector<double> parse_list(const std::string &text, const std::string &field) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw optocorr::ConfigError(field, "cannot parse number '" + item + "'");
        }
    }
    if (out.empty())
        throw optocorr::ConfigError(field, "empty list");
    return out;
}

std::string panel_path(const std::string &base, const std::string &measure, bool many) {
    if (!many)
        return base;
    const auto dot = base.rfind('.');
    if (dot == std::string::npos || base.find('/', dot) != std::string::npos)
        return base + "_" + measure + ".svg";
    return base.substr(0, dot) + "_" + measure + base.substr(dot);
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw optocorr::Error("cannot write '" + path + "'");
    out << content;
}

} // namespace

int main(int argc, char **argv) {
    using namespace optocorr;

    CLI::App app{"Renyi-2 entanglement and discord sweeps of a double-cavity optomechanical system"};
    std::string config_path, axis, range, series, out_csv, out_svg, critical, bracket;
    std::optional<double> gamma_ratio, coop, nth, r, omega_mu;
    std::vector<std::string> measures;
    std::optional<bool> log_spacing;
    bool do_verify = false;
    double tol = 1e-6;

    app.add_option("--config", config_path, "JSON sweep configuration")->check(CLI::ExistingFile);
    app.add_option("--axis", axis, "temperature_K | cooperativity | n_th | squeezing");
    app.add_option("--range", range, "start,stop,points");
    app.add_flag_callback("--log", [&] { log_spacing = true; }, "log-spaced axis");
    app.add_flag_callback("--linear", [&] { log_spacing = false; }, "linearly spaced axis");
    app.add_option("--gamma-ratio", gamma_ratio, "damping ratio gamma/kappa");
    app.add_option("--coop", coop, "cooperativity C");
    app.add_option("--nth", nth, "thermal phonon number");
    app.add_option("--r", r, "squeezing parameter");
    app.add_option("--series", series, "overlay values, e.g. r=0,1,2,3 (bare list means r)");
    app.add_option("--omega-mu", omega_mu, "mechanical angular frequency, rad/s");
    app.add_option("--out-csv", out_csv, "CSV output path (default: stdout)");
    app.add_option("--out-svg", out_svg, "SVG output path");
    app.add_option("--measure", measures, "column(s) to plot, e.g. e2_m d2_op");
    app.add_flag("--verify", do_verify, "check closed forms against the oracles");
    app.add_option("--tol", tol, "verification tolerance")->check(CLI::PositiveNumber);
    app.add_option("--critical-temperature", critical, "mechanical | optical: print T_c per series value")
        ->check(CLI::IsMember({"mechanical", "optical"}));
    app.add_option("--bracket", bracket, "T_c search bracket lo,hi in K (default 1e-6,10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    SweepConfig cfg;
    try {
        if (!config_path.empty())
            cfg = load_config(config_path);
        if (!axis.empty())
            cfg.axis = parse_axis(axis, "--axis");
        if (!range.empty()) {
            const auto v = parse_list(range, "--range");
            if (v.size() != 3 || v[2] != static_cast<int>(v[2]))
                throw ConfigError("--range", "expected start,stop,points");
            cfg.range.start = v[0];
            cfg.range.stop = v[1];
            cfg.range.points = static_cast<int>(v[2]);
        }
        if (log_spacing)
            cfg.range.log = *log_spacing;
        if (gamma_ratio)
            cfg.fixed.Gamma = *gamma_ratio;
        if (coop)
            cfg.fixed.C = *coop;
        if (nth)
            cfg.fixed.n_th = *nth;
        if (r)
            cfg.fixed.r = *r;
        if (omega_mu)
            cfg.omega_mu = *omega_mu;
        if (!series.empty()) {
            const auto eq = series.find('=');
            cfg.series_param = eq == std::string::npos
                                   ? SeriesParam::r
                                   : parse_series_param(series.substr(0, eq), "--series");
            cfg.series = parse_list(eq == std::string::npos ? series : series.substr(eq + 1), "--series");
        }
        if (!out_csv.empty())
            cfg.outputs.csv = out_csv;
        if (!out_svg.empty())
            cfg.outputs.svg = out_svg;
        if (!measures.empty())
            cfg.outputs.measures = measures;
        validate(cfg);
        if (cfg.physical)
            for (const auto &w : validate(*cfg.physical))
                std::cerr << "warning: " << w << "\n";
        for (const auto &m : cfg.outputs.measures)
            if (m == "axis" || m == "series" || !column_value(SweepRow{}, m))
                throw ConfigError("outputs.measures", "unknown measure '" + m + "'");
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kValidation;
    } catch (const Error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kValidation;
    }

    try {
        if (do_verify) {
            const VerifyReport rep = verify(cfg, tol);
            std::cout << rep.summary();
            return rep.passed ? kOk : kVerifyFailed;
        }

        if (!critical.empty()) {
            TemperatureBracket br;
            if (!bracket.empty()) {
                const auto v = parse_list(bracket, "--bracket");
                if (v.size() != 2)
                    throw ConfigError("--bracket", "expected lo,hi");
                br = {v[0], v[1]};
            }
            const Subsystem which = critical == "mechanical" ? Subsystem::mechanical : Subsystem::optical;
            std::cout << to_string(cfg.series_param) << ",T_c_K\n";
            for (double s : series_values(cfg)) {
                ReducedParams rp = base_params(cfg);
                set_param(rp, cfg.series_param, s);
                std::cout << format_g17(s) << ","
                          << format_g17(critical_temperature(rp, which, omega_mu_of(cfg), br)) << "\n";
            }
            return kOk;
        }

        const auto rows = run_sweep(cfg);
        if (cfg.outputs.csv.empty())
            write_csv(std::cout, rows);
        else
            write_file(cfg.outputs.csv, to_csv(rows));

        if (!cfg.outputs.svg.empty()) {
            const bool many = cfg.outputs.measures.size() > 1;
            for (const auto &m : cfg.outputs.measures) {
                PlotStyle style;
                style.measure = m;
                style.x_label = to_string(cfg.axis);
                style.series_label = to_string(cfg.series_param);
                style.log_x = cfg.range.log;
                write_file(panel_path(cfg.outputs.svg, m, many), emit_plot(rows, style));
            }
        }
        return kOk;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}

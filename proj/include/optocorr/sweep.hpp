#pragma once

// Parameter sweeps over temperature / cooperativity / n_th / squeezing,
// critical temperatures, and oracle verification of the closed forms.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "optocorr/correlations.hpp"
#include "optocorr/dynamics.hpp"
#include "optocorr/error.hpp"
#include "optocorr/gaussian.hpp"
#include "optocorr/model.hpp"

namespace optocorr {

enum class Axis { temperature_K, cooperativity, n_th, squeezing };

inline const char *to_string(Axis a) {
    switch (a) {
    case Axis::temperature_K:
        return "temperature_K";
    case Axis::cooperativity:
        return "cooperativity";
    case Axis::n_th:
        return "n_th";
    case Axis::squeezing:
        return "squeezing";
    }
    return "?";
}

/// Reduced parameter that a series overlays.
enum class SeriesParam { Gamma, C, n_th, r };

inline const char *to_string(SeriesParam p) {
    switch (p) {
    case SeriesParam::Gamma:
        return "Gamma";
    case SeriesParam::C:
        return "C";
    case SeriesParam::n_th:
        return "n_th";
    case SeriesParam::r:
        return "r";
    }
    return "?";
}

struct SweepRange {
    double start = 1e-5;
    double stop = 1e-1;
    int points = 200;
    bool log = true;
};

struct SweepOutputs {
    std::string csv;
    std::string svg;
    std::vector<std::string> measures{"e2_m", "e2_op"};
};

struct SweepConfig {
    Axis axis = Axis::temperature_K;
    SweepRange range;
    ReducedParams fixed{0.01, 34.0, 0.0, 0.0};
    SeriesParam series_param = SeriesParam::r;
    std::vector<double> series; ///< empty means the single fixed value
    std::optional<PhysicalParams> physical;
    double omega_mu = kDefaultOmegaMu;
    SweepOutputs outputs;
};

inline void set_param(ReducedParams &rp, SeriesParam p, double v) {
    switch (p) {
    case SeriesParam::Gamma:
        rp.Gamma = v;
        break;
    case SeriesParam::C:
        rp.C = v;
        break;
    case SeriesParam::n_th:
        rp.n_th = v;
        break;
    case SeriesParam::r:
        rp.r = v;
        break;
    }
}

inline double get_param(const ReducedParams &rp, SeriesParam p) {
    switch (p) {
    case SeriesParam::Gamma:
        return rp.Gamma;
    case SeriesParam::C:
        return rp.C;
    case SeriesParam::n_th:
        return rp.n_th;
    case SeriesParam::r:
        return rp.r;
    }
    return 0.0;
}

/// Reduced parameter driven by the axis (temperature drives n_th).
inline SeriesParam axis_param(Axis a) {
    switch (a) {
    case Axis::temperature_K:
    case Axis::n_th:
        return SeriesParam::n_th;
    case Axis::cooperativity:
        return SeriesParam::C;
    case Axis::squeezing:
        return SeriesParam::r;
    }
    return SeriesParam::n_th;
}

/// Fixed reduced parameters after folding in an optional physical block.
inline ReducedParams base_params(const SweepConfig &cfg) {
    return cfg.physical ? reduce(*cfg.physical) : cfg.fixed;
}

inline double omega_mu_of(const SweepConfig &cfg) {
    return cfg.physical ? cfg.physical->omega_mu : cfg.omega_mu;
}

inline void validate(const SweepConfig &cfg) {
    const auto &rg = cfg.range;
    if (rg.points < 2)
        throw ConfigError("range.points", "need at least 2 points");
    if (!std::isfinite(rg.start) || !std::isfinite(rg.stop) || !(rg.start < rg.stop))
        throw ConfigError("range", "need finite start < stop");
    if (rg.log && !(rg.start > 0.0))
        throw ConfigError("range.start", "log spacing needs start > 0");
    if (rg.start < 0.0)
        throw ConfigError("range.start", "swept parameter must be >= 0");
    if (cfg.axis == Axis::temperature_K && !(omega_mu_of(cfg) > 0.0))
        throw ConfigError("omega_mu", "temperature axis needs omega_mu > 0");
    if (!cfg.series.empty() && cfg.series_param == axis_param(cfg.axis))
        throw ConfigError("series.param", std::string("conflicts with axis ") + to_string(cfg.axis));
    for (std::size_t i = 0; i < cfg.series.size(); ++i)
        if (!std::isfinite(cfg.series[i]))
            throw ConfigError("series.values[" + std::to_string(i) + "]", "non-finite value");
    if (cfg.physical) {
        try {
            (void)validate(*cfg.physical);
        } catch (const InvalidInputError &e) {
            throw ConfigError("physical", e.what());
        }
    }
    try {
        ReducedParams rp = base_params(cfg);
        validate(rp);
        for (std::size_t i = 0; i < cfg.series.size(); ++i) {
            set_param(rp, cfg.series_param, cfg.series[i]);
            try {
                validate(rp);
            } catch (const InvalidInputError &e) {
                throw ConfigError("series.values[" + std::to_string(i) + "]", e.what());
            }
        }
    } catch (const InvalidInputError &e) {
        throw ConfigError(cfg.physical ? "physical" : "fixed", e.what());
    }
}

inline std::vector<double> axis_values(const SweepRange &rg) {
    std::vector<double> xs(static_cast<std::size_t>(rg.points));
    const double n = rg.points - 1;
    for (int i = 0; i < rg.points; ++i) {
        const double t = i / n;
        xs[i] = rg.log ? rg.start * std::pow(rg.stop / rg.start, t)
                       : rg.start + (rg.stop - rg.start) * t;
    }
    xs.front() = rg.start;
    xs.back() = rg.stop;
    return xs;
}

inline std::vector<double> series_values(const SweepConfig &cfg) {
    if (!cfg.series.empty())
        return cfg.series;
    return {get_param(base_params(cfg), cfg.series_param)};
}

/// Reduced parameters at one grid point.
inline ReducedParams point_params(const SweepConfig &cfg, double axis_value, double series_value) {
    ReducedParams rp = base_params(cfg);
    set_param(rp, cfg.series_param, series_value);
    if (cfg.axis == Axis::temperature_K)
        rp.n_th = thermal_occupation(omega_mu_of(cfg), axis_value);
    else
        set_param(rp, axis_param(cfg.axis), axis_value);
    return rp;
}

struct SweepRow {
    double axis = 0.0;
    double series = 0.0;
    ReducedParams params;
    TwoModeCM cm_m;
    TwoModeCM cm_op;
    CorrelationReport m;
    CorrelationReport op;
};

inline std::string describe(const ReducedParams &rp) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "Gamma=%.17g C=%.17g n_th=%.17g r=%.17g", rp.Gamma, rp.C,
                  rp.n_th, rp.r);
    return buf;
}

/// Runs f(i) for i in [0, n) on a small thread pool. If any call throws, the
/// exception of the lowest failing index is rethrown.
template <class F> void parallel_for(std::size_t n, F &&f) {
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    std::vector<std::exception_ptr> errors(n);
    std::mutex mutex;
    std::size_t next = 0;
    auto work = [&] {
        while (true) {
            std::size_t i;
            {
                std::lock_guard lock(mutex);
                if (next >= n)
                    return;
                i = next++;
            }
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

inline SweepRow evaluate_point(const ReducedParams &rp) {
    SweepRow row;
    row.params = rp;
    row.cm_m = mechanical_cm(rp);
    row.cm_op = optical_cm(rp);
    if (!is_physical(row.cm_m) || !is_physical(row.cm_op))
        throw NonPhysicalError("non-physical CM at " + describe(rp));
    row.m = analyze(row.cm_m);
    row.op = analyze(row.cm_op);
    return row;
}

/// One row per (series value, axis value), series-major.
inline std::vector<SweepRow> run_sweep(const SweepConfig &cfg) {
    validate(cfg);
    const auto xs = axis_values(cfg.range);
    const auto ss = series_values(cfg);
    std::vector<SweepRow> rows(xs.size() * ss.size());
    parallel_for(rows.size(), [&](std::size_t k) {
        const double s = ss[k / xs.size()];
        const double x = xs[k % xs.size()];
        SweepRow row = evaluate_point(point_params(cfg, x, s));
        row.axis = x;
        row.series = s;
        rows[k] = row;
    });
    return rows;
}

inline const std::vector<std::string> &csv_columns() {
    static const std::vector<std::string> cols{
        "axis",     "series",    "n_th",       "e2_m",       "e2_op",
        "d2_m",     "d2_op",     "i2_m",       "i2_op",      "det_v3_m",
        "det_v3_op", "nu_minus_m", "nu_minus_op"};
    return cols;
}

/// Value of a named CSV column; nullopt for unknown names.
inline std::optional<double> column_value(const SweepRow &row, const std::string &name) {
    if (name == "axis")
        return row.axis;
    if (name == "series")
        return row.series;
    if (name == "n_th")
        return row.params.n_th;
    if (name == "e2_m")
        return row.m.e2;
    if (name == "e2_op")
        return row.op.e2;
    if (name == "d2_m")
        return row.m.d2_a_given_b;
    if (name == "d2_op")
        return row.op.d2_a_given_b;
    if (name == "i2_m")
        return row.m.i2;
    if (name == "i2_op")
        return row.op.i2;
    if (name == "det_v3_m")
        return row.m.det_v3;
    if (name == "det_v3_op")
        return row.op.det_v3;
    if (name == "nu_minus_m")
        return row.m.nu_minus;
    if (name == "nu_minus_op")
        return row.op.nu_minus;
    return std::nullopt;
}

inline std::string format_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
    const auto &cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto &row : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            out << (i ? "," : "") << format_g17(*column_value(row, cols[i]));
        out << '\n';
    }
}

inline std::string to_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
}

struct TemperatureBracket {
    double lo = 1e-6;
    double hi = 10.0;
};

/// Smallest T (to rel_tol) from which the selected bipartition is separable.
inline double critical_temperature(const ReducedParams &rp_base, Subsystem which, double omega_mu,
                                   TemperatureBracket bracket = {}, double rel_tol = 1e-4) {
    if (!(bracket.lo > 0.0) || !(bracket.lo < bracket.hi))
        throw BracketError("critical_temperature: need 0 < lo < hi");
    auto e2_at = [&](double T) {
        ReducedParams rp = rp_base;
        rp.n_th = thermal_occupation(omega_mu, T);
        return gr2_entanglement(subsystem_cm(rp, which));
    };
    if (!(e2_at(bracket.lo) > 0.0))
        throw BracketError(std::string("critical_temperature: ") + to_string(which) +
                           " modes are not entangled at the lower bracket end");
    if (e2_at(bracket.hi) != 0.0)
        throw BracketError(std::string("critical_temperature: ") + to_string(which) +
                           " modes are still entangled at the upper bracket end");

    constexpr int kProbe = 129;
    double prev = e2_at(bracket.lo);
    for (int i = 1; i < kProbe; ++i) {
        const double T = bracket.lo * std::pow(bracket.hi / bracket.lo, double(i) / (kProbe - 1));
        const double e = e2_at(T);
        if (e > prev + 1e-12)
            throw MonotonicityViolationError("critical_temperature: E_2 increases with T near T=" +
                                             format_g17(T));
        prev = e;
    }

    double lo = bracket.lo, hi = bracket.hi;
    while (hi - lo > rel_tol * hi) {
        const double mid = std::sqrt(lo * hi);
        if (e2_at(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

/// Closed-form (mechanical, optical) CM provider; replaceable for fault injection.
using ClosedForm = std::function<std::pair<TwoModeCM, TwoModeCM>(const ReducedParams &)>;

inline std::pair<TwoModeCM, TwoModeCM> closed_form_cms(const ReducedParams &rp) {
    return {mechanical_cm(rp), optical_cm(rp)};
}

struct Deviation {
    double value = 0.0;
    std::string where; ///< quantity and grid point of the maximum
};

struct VerifyReport {
    Deviation lyapunov;
    Deviation spectral;
    Deviation discord;
    std::size_t points = 0;
    double tol = 0.0;
    bool passed = false;

    std::string summary() const {
        std::ostringstream out;
        out << "points: " << points << "\n"
            << "max |closed - lyapunov|: " << format_g17(lyapunov.value) << "  " << lyapunov.where
            << "\n"
            << "max |closed - spectral|: " << format_g17(spectral.value) << "  " << spectral.where
            << "\n"
            << "max |discord - oracle|:  " << format_g17(discord.value) << "  " << discord.where
            << "\n"
            << (passed ? "PASS" : "FAIL") << " (tol " << format_g17(tol) << ")\n";
        return out.str();
    }
};

struct VerifyOptions {
    ClosedForm closed_form = closed_form_cms;
    double oracle_tol = 1e-9;
};

namespace detail {

inline double cm_deviation(const TwoModeCM &a, const TwoModeCM &b) {
    return std::max({std::abs(a.nu1 - b.nu1), std::abs(a.nu2 - b.nu2), std::abs(a.nu3 - b.nu3),
                     std::abs(a.nu3p - b.nu3p)});
}

inline void track(Deviation &d, double value, std::string where) {
    if (value > d.value || d.where.empty()) {
        d.value = std::max(d.value, value);
        d.where = std::move(where);
    }
}

} // namespace detail

/// Recomputes both CMs at every grid point of cfg via the Lyapunov and the
/// spectral oracles, and both discords via the measurement optimizer.
inline VerifyReport verify(const SweepConfig &cfg, double tol, const VerifyOptions &opts = {}) {
    validate(cfg);
    if (!(tol > 0.0))
        throw InvalidInputError("verify: tol must be > 0");
    const auto xs = axis_values(cfg.range);
    const auto ss = series_values(cfg);
    const std::size_t n = xs.size() * ss.size();

    struct PointDev {
        double lyap = 0.0, spec = 0.0, disc = 0.0;
        std::string lyap_what, spec_what, disc_what;
    };
    std::vector<PointDev> devs(n);
    auto check_point = [&](std::size_t k, const ReducedParams &rp) {
        const auto [closed_m, closed_op] = opts.closed_form(rp);
        const LinearDynamics dyn = build_dynamics(rp);
        const FullCM lyap = lyapunov_cm(dyn);
        const double scale = std::max({1.0, std::abs(closed_m.nu1), std::abs(closed_op.nu1)});
        const double spec_tol = std::clamp(1e-2 * tol / scale, 2e-12, 1e-4);
        const FullCM spec = spectral_cm(dyn, spec_tol);
        const std::string at = describe(rp);

        PointDev &d = devs[k];
        const double lm = detail::cm_deviation(closed_m, extract_bipartition(lyap, Subsystem::mechanical));
        const double lo = detail::cm_deviation(closed_op, extract_bipartition(lyap, Subsystem::optical));
        d.lyap = std::max(lm, lo);
        d.lyap_what = std::string(lm >= lo ? "mechanical" : "optical") + " CM at " + at;
        const double sm = detail::cm_deviation(closed_m, extract_bipartition(spec, Subsystem::mechanical));
        const double so = detail::cm_deviation(closed_op, extract_bipartition(spec, Subsystem::optical));
        d.spec = std::max(sm, so);
        d.spec_what = std::string(sm >= so ? "mechanical" : "optical") + " CM at " + at;
        const double dm = std::abs(gr2_discord(closed_m) - discord_oracle(closed_m, Measured::B, opts.oracle_tol));
        const double dop = std::abs(gr2_discord(closed_op) - discord_oracle(closed_op, Measured::B, opts.oracle_tol));
        d.disc = std::max(dm, dop);
        d.disc_what = std::string(dm >= dop ? "mechanical" : "optical") + " discord at " + at;
    };
    parallel_for(n, [&](std::size_t k) {
        const ReducedParams rp = point_params(cfg, xs[k % xs.size()], ss[k / xs.size()]);
        try {
            check_point(k, rp);
        } catch (const IntegrationFailureError &e) {
            throw IntegrationFailureError(std::string(e.what()) + " at " + describe(rp), e.worst_entry());
        } catch (const Error &e) {
            throw Error(std::string(e.what()) + " at " + describe(rp));
        }
    });

    VerifyReport rep;
    rep.points = n;
    rep.tol = tol;
    for (const auto &d : devs) {
        detail::track(rep.lyapunov, d.lyap, d.lyap_what);
        detail::track(rep.spectral, d.spec, d.spec_what);
        detail::track(rep.discord, d.disc, d.disc_what);
    }
    rep.passed = rep.lyapunov.value <= tol && rep.spectral.value <= tol && rep.discord.value <= tol;
    return rep;
}

} // namespace optocorr

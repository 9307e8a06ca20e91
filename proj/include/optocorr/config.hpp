#pragma once

// JSON sweep configuration:
//
//   {
//     "axis": "temperature_K" | "cooperativity" | "n_th" | "squeezing",
//     "range": {"start": 1e-5, "stop": 0.1, "points": 200, "log": true},
//     "fixed": {"Gamma": 0.01, "C": 34, "n_th": 0, "r": 0},
//     "series": {"param": "r", "values": [0, 1, 2, 3]},
//     "omega_mu": 5950264.98,
//     "physical": {"omega_mu": ..., "m_mu": ..., ...},
//     "outputs": {"csv": "out.csv", "svg": "out.svg", "measures": ["e2_m"]}
//   }
//
// Every key is optional; missing keys keep SweepConfig defaults.

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "optocorr/error.hpp"
#include "optocorr/model.hpp"
#include "optocorr/sweep.hpp"

namespace optocorr {

inline Axis parse_axis(const std::string &s, const std::string &field = "axis") {
    if (s == "temperature_K" || s == "temperature")
        return Axis::temperature_K;
    if (s == "cooperativity" || s == "C")
        return Axis::cooperativity;
    if (s == "n_th")
        return Axis::n_th;
    if (s == "squeezing" || s == "r")
        return Axis::squeezing;
    throw ConfigError(field, "unknown axis '" + s + "'");
}

inline SeriesParam parse_series_param(const std::string &s, const std::string &field = "series.param") {
    if (s == "Gamma")
        return SeriesParam::Gamma;
    if (s == "C")
        return SeriesParam::C;
    if (s == "n_th")
        return SeriesParam::n_th;
    if (s == "r")
        return SeriesParam::r;
    throw ConfigError(field, "unknown series parameter '" + s + "'");
}

namespace detail {

using json = nlohmann::json;

inline void allow_keys(const json &j, const std::string &path, std::set<std::string> keys) {
    if (!j.is_object())
        throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (const auto &[k, v] : j.items())
        if (!keys.count(k))
            throw ConfigError(path.empty() ? k : path + "." + k, "unknown field");
}

inline double get_number(const json &j, const std::string &path) {
    if (!j.is_number())
        throw ConfigError(path, "expected a number");
    return j.get<double>();
}

inline void read_number(const json &obj, const char *key, const std::string &path, double &out) {
    if (obj.contains(key))
        out = get_number(obj.at(key), path + "." + key);
}

} // namespace detail

inline SweepConfig parse_config(const nlohmann::json &j, SweepConfig cfg = {}) {
    using detail::json;
    detail::allow_keys(j, "", {"axis", "range", "fixed", "series", "omega_mu", "physical", "outputs"});
    if (j.contains("axis")) {
        if (!j["axis"].is_string())
            throw ConfigError("axis", "expected a string");
        cfg.axis = parse_axis(j["axis"].get<std::string>());
    }
    if (j.contains("range")) {
        const json &r = j["range"];
        detail::allow_keys(r, "range", {"start", "stop", "points", "log"});
        detail::read_number(r, "start", "range", cfg.range.start);
        detail::read_number(r, "stop", "range", cfg.range.stop);
        if (r.contains("points")) {
            if (!r["points"].is_number_integer())
                throw ConfigError("range.points", "expected an integer");
            cfg.range.points = r["points"].get<int>();
        }
        if (r.contains("log")) {
            if (!r["log"].is_boolean())
                throw ConfigError("range.log", "expected a boolean");
            cfg.range.log = r["log"].get<bool>();
        }
    }
    if (j.contains("fixed")) {
        const json &f = j["fixed"];
        detail::allow_keys(f, "fixed", {"Gamma", "C", "n_th", "r"});
        detail::read_number(f, "Gamma", "fixed", cfg.fixed.Gamma);
        detail::read_number(f, "C", "fixed", cfg.fixed.C);
        detail::read_number(f, "n_th", "fixed", cfg.fixed.n_th);
        detail::read_number(f, "r", "fixed", cfg.fixed.r);
    }
    if (j.contains("series")) {
        const json &s = j["series"];
        detail::allow_keys(s, "series", {"param", "values"});
        if (s.contains("param")) {
            if (!s["param"].is_string())
                throw ConfigError("series.param", "expected a string");
            cfg.series_param = parse_series_param(s["param"].get<std::string>());
        }
        if (s.contains("values")) {
            if (!s["values"].is_array())
                throw ConfigError("series.values", "expected an array");
            cfg.series.clear();
            for (std::size_t i = 0; i < s["values"].size(); ++i)
                cfg.series.push_back(
                    detail::get_number(s["values"][i], "series.values[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("omega_mu"))
        cfg.omega_mu = detail::get_number(j["omega_mu"], "omega_mu");
    if (j.contains("physical")) {
        const json &p = j["physical"];
        detail::allow_keys(p, "physical", {"omega_mu", "m_mu", "gamma", "l", "omega_c", "kappa",
                                           "omega_L", "power", "T", "r"});
        PhysicalParams pp = experimental_params();
        detail::read_number(p, "omega_mu", "physical", pp.omega_mu);
        detail::read_number(p, "m_mu", "physical", pp.m_mu);
        detail::read_number(p, "gamma", "physical", pp.gamma);
        detail::read_number(p, "l", "physical", pp.l);
        detail::read_number(p, "omega_c", "physical", pp.omega_c);
        detail::read_number(p, "kappa", "physical", pp.kappa);
        detail::read_number(p, "omega_L", "physical", pp.omega_L);
        detail::read_number(p, "power", "physical", pp.power);
        detail::read_number(p, "T", "physical", pp.T);
        detail::read_number(p, "r", "physical", pp.r);
        cfg.physical = pp;
    }
    if (j.contains("outputs")) {
        const json &o = j["outputs"];
        detail::allow_keys(o, "outputs", {"csv", "svg", "measures"});
        if (o.contains("csv")) {
            if (!o["csv"].is_string())
                throw ConfigError("outputs.csv", "expected a string");
            cfg.outputs.csv = o["csv"].get<std::string>();
        }
        if (o.contains("svg")) {
            if (!o["svg"].is_string())
                throw ConfigError("outputs.svg", "expected a string");
            cfg.outputs.svg = o["svg"].get<std::string>();
        }
        if (o.contains("measures")) {
            if (!o["measures"].is_array())
                throw ConfigError("outputs.measures", "expected an array");
            cfg.outputs.measures.clear();
            for (std::size_t i = 0; i < o["measures"].size(); ++i) {
                const auto &m = o["measures"][i];
                if (!m.is_string())
                    throw ConfigError("outputs.measures[" + std::to_string(i) + "]",
                                      "expected a string");
                cfg.outputs.measures.push_back(m.get<std::string>());
            }
        }
    }
    return cfg;
}

inline SweepConfig parse_config_text(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("<document>", e.what());
    }
    return parse_config(j);
}

inline SweepConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("<file>", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace optocorr

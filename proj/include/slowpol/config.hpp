#ifndef SLOWPOL_CONFIG_HPP
#define SLOWPOL_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "slowpol/medium.hpp"
#include "slowpol/presets.hpp"

namespace slowpol {

// Flat `key = value` configuration. Unknown keys are a hard error; every
// physical key is validated (with its SI unit named) before any
// computation runs. NaN marks "resolve from the medium at run time".
struct RunConfig {
    MediumParams medium{};
    std::string command;  // dispersion | composition | protocol | fwm

    // dispersion / composition sweeps
    double k_min = std::numeric_limits<double>::quiet_NaN();
    double k_max = std::numeric_limits<double>::quiet_NaN();
    int samples = 400;

    // protocol
    double carrier_k = std::numeric_limits<double>::quiet_NaN();
    double bandwidth_ratio = 0.02;
    int packet_samples = 129;
    double t1 = 0.0;
    double t2 = 1.0e-6;
    double t_final = std::numeric_limits<double>::quiet_NaN();
    double new_Omega_c = std::numeric_limits<double>::quiet_NaN();
    double new_k_c = std::numeric_limits<double>::quiet_NaN();
    int z_samples = 1024;

    // fwm
    double probe_k = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct ConfigEntry {
    std::string value;
    int line;
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                          s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline double parse_number(const std::string& key, const ConfigEntry& e) {
    const std::string_view v = e.value;
    double out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        std::ostringstream msg;
        msg << "line " << e.line << ": key '" << key << "': cannot parse '"
            << e.value << "' as a number";
        throw ParseError(msg.str());
    }
    return out;
}

inline int parse_count(const std::string& key, const ConfigEntry& e) {
    const double d = parse_number(key, e);
    if (d != std::floor(d) || std::abs(d) > 1e9) {
        std::ostringstream msg;
        msg << "line " << e.line << ": key '" << key << "': '" << e.value
            << "' is not an integer count";
        throw ParseError(msg.str());
    }
    return static_cast<int>(d);
}

} // namespace detail

inline RunConfig parse_config(std::string_view text) {
    using detail::ConfigEntry;
    static const std::set<std::string> known = {
        "preset",      "rho",        "mu",
        "omega_e",     "omega_q",    "omega_c",
        "Omega_c",     "k_c",        "M",
        "Gamma0",      "x",          "detuning_warn_ratio",
        "command",     "k_min",      "k_max",
        "samples",     "carrier_k",  "bandwidth_ratio",
        "packet_samples", "t1",      "t2",
        "t_final",     "new_Omega_c", "new_k_c",
        "z_samples",   "probe_k"};

    std::map<std::string, ConfigEntry> entries;
    int lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++lineno;
        if (const size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            std::ostringstream msg;
            msg << "line " << lineno << ": expected 'key = value', got '"
                << line << "'";
            throw ParseError(msg.str());
        }
        const std::string key{detail::trim(line.substr(0, eq))};
        const std::string value{detail::trim(line.substr(eq + 1))};
        if (key.empty() || value.empty()) {
            std::ostringstream msg;
            msg << "line " << lineno << ": empty key or value";
            throw ParseError(msg.str());
        }
        if (!known.count(key)) {
            std::ostringstream msg;
            msg << "line " << lineno << ": unknown key '" << key << "'";
            throw ParseError(msg.str());
        }
        if (const auto it = entries.find(key); it != entries.end()) {
            std::ostringstream msg;
            msg << "duplicate key '" << key << "' at lines "
                << it->second.line << " and " << lineno;
            throw ParseError(msg.str());
        }
        entries.emplace(key, ConfigEntry{value, lineno});
    }

    RunConfig cfg;
    std::set<std::string> medium_given;

    if (const auto it = entries.find("preset"); it != entries.end()) {
        if (it->second.value != "hau2001") {
            std::ostringstream msg;
            msg << "line " << it->second.line << ": unknown preset '"
                << it->second.value << "' (available: hau2001)";
            throw ValidationError(msg.str());
        }
        cfg.medium = hau2001();
        medium_given = {"rho",     "mu", "omega_e", "omega_q", "omega_c",
                        "Omega_c", "k_c", "M",      "Gamma0",  "x"};
    }

    const auto take = [&](const char* key, double& dst) {
        if (const auto it = entries.find(key); it != entries.end()) {
            dst = detail::parse_number(key, it->second);
            medium_given.insert(key);
        }
    };
    take("rho", cfg.medium.rho);
    take("mu", cfg.medium.mu);
    take("omega_e", cfg.medium.omega_e);
    take("omega_q", cfg.medium.omega_q);
    take("omega_c", cfg.medium.omega_c);
    take("Omega_c", cfg.medium.Omega_c);
    take("k_c", cfg.medium.k_c);
    take("M", cfg.medium.M);
    take("Gamma0", cfg.medium.Gamma0);
    take("x", cfg.medium.x);
    take("detuning_warn_ratio", cfg.medium.detuning_warn_ratio);
    medium_given.insert("x");                     // has a default (2/3)
    medium_given.insert("detuning_warn_ratio");   // has a default

    // resonant-control defaults for the beta-determining frequencies
    if (!medium_given.count("omega_c") && medium_given.count("omega_e") &&
        medium_given.count("omega_q")) {
        cfg.medium.omega_c = cfg.medium.omega_e - cfg.medium.omega_q;
        medium_given.insert("omega_c");
    }
    if (!medium_given.count("k_c") && medium_given.count("omega_c")) {
        cfg.medium.k_c = cfg.medium.omega_c / constants.c;
        medium_given.insert("k_c");
    }

    static const std::vector<std::pair<std::string, std::string>> required = {
        {"rho", "m^-3"},     {"mu", "C m"},       {"omega_e", "rad/s"},
        {"omega_q", "rad/s"}, {"Omega_c", "rad/s"}, {"M", "kg"},
        {"Gamma0", "1/s"}};
    for (const auto& [key, unit] : required) {
        if (!medium_given.count(key)) {
            std::ostringstream msg;
            msg << "missing required key '" << key << "' (" << unit
                << "); set it or use preset = hau2001";
            throw ValidationError(msg.str());
        }
    }
    cfg.medium.validate();

    if (const auto it = entries.find("command"); it != entries.end()) {
        const std::string& c = it->second.value;
        if (c != "dispersion" && c != "composition" && c != "protocol" &&
            c != "fwm") {
            std::ostringstream msg;
            msg << "line " << it->second.line << ": unknown command '" << c
                << "' (expected dispersion, composition, protocol or fwm)";
            throw ValidationError(msg.str());
        }
        cfg.command = c;
    }

    const auto take_plain = [&](const char* key, double& dst) {
        if (const auto it = entries.find(key); it != entries.end())
            dst = detail::parse_number(key, it->second);
    };
    const auto take_count = [&](const char* key, int& dst) {
        if (const auto it = entries.find(key); it != entries.end())
            dst = detail::parse_count(key, it->second);
    };
    take_plain("k_min", cfg.k_min);
    take_plain("k_max", cfg.k_max);
    take_count("samples", cfg.samples);
    take_plain("carrier_k", cfg.carrier_k);
    take_plain("bandwidth_ratio", cfg.bandwidth_ratio);
    take_count("packet_samples", cfg.packet_samples);
    take_plain("t1", cfg.t1);
    take_plain("t2", cfg.t2);
    take_plain("t_final", cfg.t_final);
    take_plain("new_Omega_c", cfg.new_Omega_c);
    take_plain("new_k_c", cfg.new_k_c);
    take_count("z_samples", cfg.z_samples);
    take_plain("probe_k", cfg.probe_k);

    if (cfg.samples < 2)
        throw ValidationError("samples (count) must be >= 2");
    if (cfg.packet_samples < 1)
        throw ValidationError("packet_samples (count) must be >= 1");
    if (cfg.z_samples < 16)
        throw ValidationError("z_samples (count) must be >= 16");
    if (!(cfg.bandwidth_ratio >= 0.0))
        throw ValidationError(
            "bandwidth_ratio (dimensionless) must be >= 0");
    if (!std::isnan(cfg.k_min) && !std::isnan(cfg.k_max) &&
        !(cfg.k_min < cfg.k_max))
        throw ValidationError("k_min (rad/m) must be below k_max (rad/m)");
    if (!(cfg.t1 >= 0.0) || !(cfg.t2 >= cfg.t1))
        throw ValidationError("times (s) must satisfy 0 <= t1 <= t2");
    if (!std::isnan(cfg.t_final) && !(cfg.t_final >= cfg.t2))
        throw ValidationError("t_final (s) must be >= t2 (s)");
    if (!std::isnan(cfg.new_Omega_c) && !(cfg.new_Omega_c > 0.0))
        throw ValidationError("new_Omega_c (rad/s) must be > 0");
    return cfg;
}

} // namespace slowpol

#endif // SLOWPOL_CONFIG_HPP

// Copyright 2026 The seaqtsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "seaqtsim/experiments.hpp"

// Device configuration: a JSON key-value tree carrying the per-qubit table
// and the engine/integrator defaults. Frequencies are given in GHz/kHz and
// gate times in ns; conversions to rad/us and us happen here.

namespace seaqtsim {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DeviceConfig {
    std::string name;
    std::uint64_t seed = 0;
    EngineSettings settings;
    std::vector<QubitParams> qubits;
    std::uint64_t hash = 0;  // FNV-1a of the canonical serialization

    const QubitParams& qubit(int index) const {
        for (const auto& q : qubits) {
            if (q.index == index) return q;
        }
        throw ConfigError("config: no qubit with index " + std::to_string(index));
    }
};

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace detail {

template <class T>
inline T get_required(const nlohmann::json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("config: " + where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: " + where + ": field '" + key + "' has the wrong type");
    }
}

template <class T>
inline T get_or(const nlohmann::json& j, const std::string& key, T fallback,
                const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: " + where + ": field '" + key + "' has the wrong type");
    }
}

inline QubitParams parse_qubit(const nlohmann::json& j, std::size_t pos) {
    const std::string where = "qubits[" + std::to_string(pos) + "]";
    QubitParams q;
    q.index = get_required<int>(j, "index", where);
    q.freq_ghz = get_required<double>(j, "freq_ghz", where);
    q.delta_f_khz = get_required<double>(j, "delta_f_khz", where);
    q.x0_us = get_required<double>(j, "x0_us", where);
    q.tau_dj_us = get_required<double>(j, "tau_dj_us", where);
    if (j.contains("tau_dj_2q_us")) q.tau_dj_2q_us = get_required<double>(j, "tau_dj_2q_us", where);
    q.inv_gamma1_us = get_required<double>(j, "inv_gamma1_us", where);
    q.inv_gamma2_us = get_required<double>(j, "inv_gamma2_us", where);
    q.t1_ref_us = get_or<double>(j, "t1_ref_us", 0.0, where);
    q.t2_ref_us = get_or<double>(j, "t2_ref_us", 0.0, where);
    try {
        q.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config: " + where + ": " + e.what());
    }
    return q;
}

}  // namespace detail

inline DeviceConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    DeviceConfig cfg;
    cfg.name = detail::get_or<std::string>(j, "name", "unnamed", "root");
    const long long seed = detail::get_or<long long>(j, "seed", 0, "root");
    if (seed < 0) throw ConfigError("config: root: field 'seed' must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);

    if (j.contains("integrator")) {
        const auto& ji = j.at("integrator");
        auto& ic = cfg.settings.integrator;
        ic.dt = detail::get_or<double>(ji, "dt_us", ic.dt, "integrator");
        ic.tol_trace = detail::get_or<double>(ji, "tol_trace", ic.tol_trace, "integrator");
        ic.tol_psd = detail::get_or<double>(ji, "tol_psd", ic.tol_psd, "integrator");
        ic.resym = detail::get_or<bool>(ji, "resym", ic.resym, "integrator");
        if (ic.dt <= 0.0) throw ConfigError("config: integrator: field 'dt_us' must be positive");
    }

    if (j.contains("seaqt")) {
        const auto& js = j.at("seaqt");
        auto& s = cfg.settings;
        s.beta_r_omega = detail::get_or<double>(js, "beta_r_omega", s.beta_r_omega, "seaqt");
        s.tau_floor_frac = detail::get_or<double>(js, "tau_floor_frac", s.tau_floor_frac, "seaqt");
        s.rank_eps = detail::get_or<double>(js, "rank_eps", s.rank_eps, "seaqt");
        s.combined_reservoir =
            detail::get_or<bool>(js, "combined_reservoir", s.combined_reservoir, "seaqt");
        const std::string deph =
            detail::get_or<std::string>(js, "dephasing", "determinant", "seaqt");
        if (deph == "determinant") {
            s.dephasing = SeaqtConfig::Dephasing::determinant;
        } else if (deph == "entropy") {
            s.dephasing = SeaqtConfig::Dephasing::entropy_form;
        } else if (deph == "off") {
            s.dephasing = SeaqtConfig::Dephasing::off;
        } else {
            throw ConfigError("config: seaqt: field 'dephasing' must be one of "
                              "determinant|entropy|off");
        }
        const std::string sign = detail::get_or<std::string>(js, "tau_dr_sign", "plus", "seaqt");
        if (sign == "plus") {
            s.tau_dr_sign = SeaqtConfig::TauDrSign::plus;
        } else if (sign == "minus") {
            s.tau_dr_sign = SeaqtConfig::TauDrSign::minus;
        } else {
            throw ConfigError("config: seaqt: field 'tau_dr_sign' must be plus|minus");
        }
        if (s.tau_floor_frac <= 0.0 || s.tau_floor_frac >= 1.0) {
            throw ConfigError("config: seaqt: field 'tau_floor_frac' must lie in (0, 1)");
        }
    }

    if (j.contains("experiment")) {
        const auto& je = j.at("experiment");
        const long long shots = detail::get_or<long long>(je, "shots", 8192, "experiment");
        if (shots < 1) throw ConfigError("config: experiment: field 'shots' must be >= 1");
        cfg.settings.prep_error =
            detail::get_or<double>(je, "prep_error", cfg.settings.prep_error, "experiment");
        cfg.settings.pulse_resolved_prep = detail::get_or<bool>(
            je, "pulse_resolved_prep", cfg.settings.pulse_resolved_prep, "experiment");
        if (cfg.settings.prep_error < 0.0 || cfg.settings.prep_error > 0.5) {
            throw ConfigError("config: experiment: field 'prep_error' must lie in [0, 0.5]");
        }
    }

    if (j.contains("gates")) {
        const auto& jg = j.at("gates");
        auto& g = cfg.settings.gates;
        const double t_gate_ns = detail::get_or<double>(jg, "t_gate_ns", 35.2, "gates");
        if (t_gate_ns <= 0.0) throw ConfigError("config: gates: field 't_gate_ns' must be positive");
        g.t_gate_us = t_gate_ns * 1e-3;
        g.sigma_frac = detail::get_or<double>(jg, "sigma_frac", g.sigma_frac, "gates");
        g.drag_beta = detail::get_or<double>(jg, "drag_beta", g.drag_beta, "gates");
        if (g.sigma_frac <= 0.0) throw ConfigError("config: gates: field 'sigma_frac' must be positive");
    }

    if (j.contains("entangle")) {
        const auto& je = j.at("entangle");
        auto& en = cfg.settings.entangle;
        en.cr.amp_scale = detail::get_or<double>(je, "amp_scale", en.cr.amp_scale, "entangle");
        en.local_correction =
            detail::get_or<bool>(je, "local_correction", en.local_correction, "entangle");
        en.explicit_echo = detail::get_or<bool>(je, "explicit_echo", en.explicit_echo, "entangle");
        if (je.contains("nu")) {
            const auto& jn = je.at("nu");
            en.cr.nu_zx = detail::get_or<double>(jn, "zx", en.cr.nu_zx, "entangle.nu");
            en.cr.nu_iz = detail::get_or<double>(jn, "iz", en.cr.nu_iz, "entangle.nu");
            en.cr.nu_ix = detail::get_or<double>(jn, "ix", en.cr.nu_ix, "entangle.nu");
            en.cr.nu_zi = detail::get_or<double>(jn, "zi", en.cr.nu_zi, "entangle.nu");
            en.cr.nu_zz = detail::get_or<double>(jn, "zz", en.cr.nu_zz, "entangle.nu");
        }
        if (je.contains("nu_echo")) {
            const auto& jn = je.at("nu_echo");
            en.cr.nu_echo_zx = detail::get_or<double>(jn, "zx", en.cr.nu_echo_zx, "entangle.nu_echo");
            en.cr.nu_echo_iy = detail::get_or<double>(jn, "iy", en.cr.nu_echo_iy, "entangle.nu_echo");
            en.cr.nu_echo_iz = detail::get_or<double>(jn, "iz", en.cr.nu_echo_iz, "entangle.nu_echo");
        }
    }

    if (!j.contains("qubits") || !j.at("qubits").is_array() || j.at("qubits").empty()) {
        throw ConfigError("config: root: missing or empty 'qubits' array");
    }
    std::size_t pos = 0;
    for (const auto& jq : j.at("qubits")) {
        cfg.qubits.push_back(detail::parse_qubit(jq, pos));
        ++pos;
    }
    for (std::size_t i = 0; i < cfg.qubits.size(); ++i) {
        for (std::size_t k = i + 1; k < cfg.qubits.size(); ++k) {
            if (cfg.qubits[i].index == cfg.qubits[k].index) {
                throw ConfigError("config: duplicate qubit index " +
                                  std::to_string(cfg.qubits[i].index));
            }
        }
    }

    cfg.hash = fnv1a64(j.dump());
    return cfg;
}

inline DeviceConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline std::string hash_string(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace seaqtsim

#pragma once

// Experiment configuration: JSON in, JSON out. File values use the same
// units as the library (energies in units of the lowest box level, times in
// inverse energy, momenta in inverse length), so parsing performs no unit
// arithmetic and a load/save cycle reproduces every double bit for bit.
// Channels are numbered from 1 in files and on the command line; internally
// they are 0-based indices.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcs/channels.hpp"
#include "fcs/errors.hpp"
#include "fcs/quadrature.hpp"
#include "fcs/scatterer.hpp"
#include "fcs/wavepacket.hpp"

namespace fcs {

struct SweepGrid {
    double tau_min = 0.0;
    double tau_max = 0.0;
    int tau_points = 2;

    std::vector<double> taus() const {
        if (tau_points < 2) throw config_error("sweep needs at least two tau points");
        if (!(tau_max > tau_min)) throw config_error("sweep needs tau_max > tau_min");
        std::vector<double> t(tau_points);
        for (int i = 0; i < tau_points; ++i)
            t[i] = tau_min + (tau_max - tau_min) * double(i) / double(tau_points - 1);
        return t;
    }
};

struct ExperimentConfig {
    std::vector<ChannelSpec> channels;
    ScattererModel scatterer = BreitWigner{};
    std::vector<WavePacketMode> modes;
    QuadratureSettings quadrature;
    double tau = 0.0;
    std::optional<SweepGrid> sweep;
};

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.channels.empty()) throw config_error("config needs at least one channel");
    for (const auto& ch : cfg.channels)
        if (!(ch.mass > 0.0)) throw config_error("channel mass must be positive");
    validate_scatterer(cfg.scatterer, cfg.channels.size());
    if (cfg.modes.empty()) throw config_error("config needs at least one mode");
    for (const auto& m : cfg.modes) validate_mode(m, cfg.channels.size());
    if (!(cfg.quadrature.window_half_widths > 0.0))
        throw config_error("quadrature window must be positive");
    if (cfg.quadrature.base_nodes < 2) throw config_error("quadrature base_nodes must be >= 2");
    if (!(cfg.quadrature.scale > 0.0)) throw config_error("quadrature scale must be positive");
    if (cfg.sweep) cfg.sweep->taus(); // throws on a bad grid
}

namespace detail {

using json = nlohmann::json;

inline const json& require_field(const json& j, const char* key, const char* where) {
    const auto it = j.find(key);
    if (it == j.end())
        throw config_error(std::string(where) + " is missing required field \"" + key + "\"");
    return *it;
}

inline double number_field(const json& j, const char* key, const char* where) {
    const json& v = require_field(j, key, where);
    if (!v.is_number())
        throw config_error(std::string(where) + " field \"" + key + "\" must be a number");
    return v.get<double>();
}

inline double number_or(const json& j, const char* key, double fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw config_error(std::string("field \"") + key + "\" must be a number");
    return it->get<double>();
}

inline ScattererModel parse_scatterer(const json& j, std::size_t num_channels) {
    if (!j.is_object()) throw config_error("\"scatterer\" must be an object");
    const json& type = require_field(j, "type", "scatterer");
    const std::string t = type.get<std::string>();
    if (t == "breit_wigner") {
        BreitWigner bw;
        bw.resonance_energy = number_field(j, "resonance_energy", "scatterer");
        bw.width = number_field(j, "width", "scatterer");
        bw.global_phase = number_or(j, "global_phase", 0.0);
        return bw;
    }
    if (t == "constant_unitary") {
        const json& rows = require_field(j, "matrix", "scatterer");
        if (!rows.is_array() || rows.size() != num_channels)
            throw config_error("scatterer matrix must have one row per channel");
        ComplexMatrix u(num_channels, num_channels);
        for (std::size_t r = 0; r < num_channels; ++r) {
            const json& row = rows[r];
            if (!row.is_array() || row.size() != num_channels)
                throw config_error("scatterer matrix rows must have one [re, im] pair per channel");
            for (std::size_t c = 0; c < num_channels; ++c) {
                const json& e = row[c];
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                    throw config_error("scatterer matrix entries must be [re, im] pairs");
                u(r, c) = cd(e[0].get<double>(), e[1].get<double>());
            }
        }
        return ConstantUnitary{std::move(u)};
    }
    if (t == "diagonal_phases") {
        const json& phases = require_field(j, "phases", "scatterer");
        if (!phases.is_array() || phases.size() != num_channels)
            throw config_error("scatterer phases must list one angle per channel");
        DiagonalPhases dp;
        for (const json& p : phases) {
            if (!p.is_number()) throw config_error("scatterer phases must be numbers");
            dp.phases.push_back(p.get<double>());
        }
        return dp;
    }
    throw config_error("unknown scatterer type \"" + t + "\"");
}

inline json scatterer_to_json(const ScattererModel& model) {
    json j;
    if (const auto* bw = std::get_if<BreitWigner>(&model)) {
        j["type"] = "breit_wigner";
        j["resonance_energy"] = bw->resonance_energy;
        j["width"] = bw->width;
        j["global_phase"] = bw->global_phase;
    } else if (const auto* cu = std::get_if<ConstantUnitary>(&model)) {
        j["type"] = "constant_unitary";
        json rows = json::array();
        for (std::size_t r = 0; r < cu->u.rows(); ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < cu->u.cols(); ++c)
                row.push_back(json::array({cu->u(r, c).real(), cu->u(r, c).imag()}));
            rows.push_back(std::move(row));
        }
        j["matrix"] = std::move(rows);
    } else {
        const auto& dp = std::get<DiagonalPhases>(model);
        j["type"] = "diagonal_phases";
        j["phases"] = dp.phases;
    }
    return j;
}

} // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
    using detail::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config root must be a JSON object");

    ExperimentConfig cfg;
    const json& channels = detail::require_field(j, "channels", "config");
    if (!channels.is_array() || channels.empty())
        throw config_error("\"channels\" must be a nonempty array");
    int index = 0;
    for (const json& c : channels) {
        if (!c.is_object()) throw config_error("channel entries must be objects");
        ChannelSpec ch;
        ch.index = index++;
        ch.threshold = detail::number_or(c, "threshold", 0.0);
        ch.mass = detail::number_or(c, "mass", 1.0);
        cfg.channels.push_back(ch);
    }

    cfg.scatterer = detail::parse_scatterer(detail::require_field(j, "scatterer", "config"),
                                            cfg.channels.size());

    const json& modes = detail::require_field(j, "modes", "config");
    if (!modes.is_array() || modes.empty()) throw config_error("\"modes\" must be a nonempty array");
    for (const json& m : modes) {
        if (!m.is_object()) throw config_error("mode entries must be objects");
        WavePacketMode mode;
        const double ch = detail::number_field(m, "channel", "mode");
        if (ch != double(int(ch)) || int(ch) < 1 || std::size_t(ch) > cfg.channels.size())
            throw config_error("mode channel must be an integer between 1 and the channel count");
        mode.channel = int(ch) - 1;
        mode.center_momentum = detail::number_field(m, "center_momentum", "mode");
        mode.momentum_width = detail::number_field(m, "momentum_width", "mode");
        mode.inject_position = detail::number_or(m, "inject_position", 0.0);
        mode.inject_time = detail::number_or(m, "inject_time", 0.0);
        mode.delay_factor = detail::number_or(m, "delay_factor", 0.0);
        cfg.modes.push_back(mode);
    }

    if (const auto it = j.find("quadrature"); it != j.end()) {
        if (!it->is_object()) throw config_error("\"quadrature\" must be an object");
        QuadratureSettings q;
        q.window_half_widths = detail::number_or(*it, "window_half_widths", q.window_half_widths);
        const double bn = detail::number_or(*it, "base_nodes", double(q.base_nodes));
        if (bn != double(int(bn)) || bn < 1) throw config_error("base_nodes must be a positive integer");
        q.base_nodes = int(bn);
        q.scale = detail::number_or(*it, "scale", q.scale);
        q.unitarity_tol = detail::number_or(*it, "unitarity_tol", q.unitarity_tol);
        q.convergence_tol = detail::number_or(*it, "convergence_tol", q.convergence_tol);
        cfg.quadrature = q;
    }

    cfg.tau = detail::number_or(j, "tau", 0.0);

    if (const auto it = j.find("sweep"); it != j.end()) {
        if (!it->is_object()) throw config_error("\"sweep\" must be an object");
        SweepGrid grid;
        grid.tau_min = detail::number_or(*it, "tau_min", 0.0);
        grid.tau_max = detail::number_field(*it, "tau_max", "sweep");
        const double np = detail::number_or(*it, "tau_points", 2.0);
        if (np != double(int(np)) || np < 2) throw config_error("tau_points must be an integer >= 2");
        grid.tau_points = int(np);
        cfg.sweep = grid;
    }

    validate_config(cfg);
    return cfg;
}

inline std::string config_to_json(const ExperimentConfig& cfg) {
    using detail::json;
    json j;
    json channels = json::array();
    for (const auto& ch : cfg.channels)
        channels.push_back(json{{"threshold", ch.threshold}, {"mass", ch.mass}});
    j["channels"] = std::move(channels);
    j["scatterer"] = detail::scatterer_to_json(cfg.scatterer);
    json modes = json::array();
    for (const auto& m : cfg.modes)
        modes.push_back(json{{"channel", m.channel + 1},
                             {"center_momentum", m.center_momentum},
                             {"momentum_width", m.momentum_width},
                             {"inject_position", m.inject_position},
                             {"inject_time", m.inject_time},
                             {"delay_factor", m.delay_factor}});
    j["modes"] = std::move(modes);
    j["quadrature"] = json{{"window_half_widths", cfg.quadrature.window_half_widths},
                           {"base_nodes", cfg.quadrature.base_nodes},
                           {"scale", cfg.quadrature.scale},
                           {"unitarity_tol", cfg.quadrature.unitarity_tol},
                           {"convergence_tol", cfg.quadrature.convergence_tol}};
    j["tau"] = cfg.tau;
    if (cfg.sweep)
        j["sweep"] = json{{"tau_min", cfg.sweep->tau_min},
                          {"tau_max", cfg.sweep->tau_max},
                          {"tau_points", cfg.sweep->tau_points}};
    return j.dump(2) + "\n";
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

inline void save_config_file(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write config file: " + path);
    out << config_to_json(cfg);
}

} // namespace fcs

/*
 Copyright 2026 The cipw Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef CIPW_CONFIG_HPP
#define CIPW_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cipw/controller.hpp"
#include "cipw/experiments.hpp"
#include "cipw/serialization.hpp"
#include "cipw/table_io.hpp"

namespace cipw {

struct AgentConfig {
    std::filesystem::path table;
    SelectorSet J;
    double tau_d = 0.0;
    std::optional<double> P;
};

struct SweepSpec {
    double Q_max = 0.06;
    int N_Q = 100;
    DisturbanceSide side = DisturbanceSide::First;
    std::optional<double> disturbance_width; ///< defaults to dt
};

struct SimulateSpec {
    std::optional<StateVector> initial_state; ///< defaults to the trivial state
    double Q = 0.0;
    Agent side = Agent::First;
};

struct SliceSpec {
    std::filesystem::path table;
    std::size_t row_dim = 0;
    std::size_t col_dim = 2;
    std::optional<std::vector<double>> through; ///< defaults to the box center
};

struct ValidateSpec {
    int coarse = 5;
    int fine = 10;
    int probes = 200;
    std::optional<GridSpec> box; ///< defaults to the default measurement box
};

/// Everything a CLI run needs; an empty JSON object yields the built-in defaults.
struct RunConfig {
    ModelParams model;
    SimSettings sim;
    ImpulseParams impulse;
    MeasurementMode mode = MeasurementMode::FourDim;
    std::optional<GridSpec> grid;
    int resolution = 10;
    std::optional<AgentConfig> agent1;
    std::optional<AgentConfig> agent2;
    SweepSpec sweep;
    std::vector<double> delays{0.0, 0.0005, 0.001, 0.0015, 0.002, 0.0025, 0.003,
                               0.0035, 0.004, 0.0045, 0.005, 0.0055, 0.006};
    SimulateSpec simulate;
    SliceSpec slice;
    ValidateSpec validate;
    std::optional<std::filesystem::path> output;
    unsigned jobs = 1;

    GridSpec learn_grid() const {
        GridSpec g = grid ? *grid : GridSpec::default_box(resolution);
        if (g.dim() != dimension(mode)) throw Error(ErrorKind::Config, "grid dimension does not match measurement mode");
        return g;
    }
};

namespace detail {

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

inline AgentConfig agent_from_json(const json& j, const std::filesystem::path& base, SelectorSet default_J) {
    check_keys(j, "agent", {"table", "J", "tau_d", "P"});
    AgentConfig a;
    if (!j.contains("table")) throw Error(ErrorKind::Config, "agent entry needs a table path");
    a.table = resolve(base, j.at("table").get<std::string>());
    a.J = j.contains("J") ? SelectorSet(j.at("J").get<std::vector<int>>()) : default_J;
    read_opt(j, "tau_d", a.tau_d);
    if (j.contains("P")) a.P = j.at("P").get<double>();
    if (a.tau_d < 0) throw Error(ErrorKind::Config, "tau_d must be non-negative");
    return a;
}

inline StateVector state_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 8) throw Error(ErrorKind::Config, "initial_state needs 8 components");
    StateVector s;
    for (std::size_t i = 0; i < 8; ++i) s[i] = v[i];
    return s;
}

} // namespace detail

/// Parses a run configuration; relative paths resolve against `base`.
inline RunConfig parse_run_config(const json& j, const std::filesystem::path& base = {}) {
    using detail::check_keys;
    using detail::read_opt;
    check_keys(j, "config", {"model", "simulation", "impulse", "mode", "grid", "resolution", "agent1", "agent2",
                             "sweep", "delays", "simulate", "slice", "validate", "output", "jobs"});
    RunConfig c;
    try {
        read_opt(j, "model", c.model);
        read_opt(j, "simulation", c.sim);
        c.impulse.delta_tau = c.sim.dt;
        c.impulse.tau_G = c.sim.dt;
        if (j.contains("impulse")) from_json(j.at("impulse"), c.impulse);
        if (j.contains("mode")) c.mode = measurement_mode_from_string(j.at("mode").get<std::string>());
        if (j.contains("grid")) c.grid = j.at("grid").get<GridSpec>();
        read_opt(j, "resolution", c.resolution);
        if (j.contains("agent1")) c.agent1 = detail::agent_from_json(j.at("agent1"), base, {2, 3});
        if (j.contains("agent2")) c.agent2 = detail::agent_from_json(j.at("agent2"), base, {4, 7});
        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            check_keys(s, "sweep", {"Q_max", "N_Q", "side", "disturbance_width"});
            read_opt(s, "Q_max", c.sweep.Q_max);
            read_opt(s, "N_Q", c.sweep.N_Q);
            if (s.contains("side")) c.sweep.side = disturbance_side_from_string(s.at("side").get<std::string>());
            if (s.contains("disturbance_width")) c.sweep.disturbance_width = s.at("disturbance_width").get<double>();
        }
        read_opt(j, "delays", c.delays);
        if (j.contains("simulate")) {
            const json& s = j.at("simulate");
            check_keys(s, "simulate", {"initial_state", "Q", "side"});
            if (s.contains("initial_state")) c.simulate.initial_state = detail::state_from_json(s.at("initial_state"));
            read_opt(s, "Q", c.simulate.Q);
            if (s.contains("side")) {
                const auto side = disturbance_side_from_string(s.at("side").get<std::string>());
                if (side == DisturbanceSide::Both) throw Error(ErrorKind::Config, "simulate.side must be agent1 or agent2");
                c.simulate.side = side == DisturbanceSide::First ? Agent::First : Agent::Second;
            }
        }
        if (j.contains("slice")) {
            const json& s = j.at("slice");
            check_keys(s, "slice", {"table", "row_dim", "col_dim", "through"});
            if (s.contains("table")) c.slice.table = detail::resolve(base, s.at("table").get<std::string>());
            read_opt(s, "row_dim", c.slice.row_dim);
            read_opt(s, "col_dim", c.slice.col_dim);
            if (s.contains("through")) c.slice.through = s.at("through").get<std::vector<double>>();
        }
        if (j.contains("validate")) {
            const json& s = j.at("validate");
            check_keys(s, "validate", {"coarse", "fine", "probes", "box"});
            read_opt(s, "coarse", c.validate.coarse);
            read_opt(s, "fine", c.validate.fine);
            read_opt(s, "probes", c.validate.probes);
            if (s.contains("box")) c.validate.box = s.at("box").get<GridSpec>();
        }
        if (j.contains("output")) c.output = detail::resolve(base, j.at("output").get<std::string>());
        read_opt(j, "jobs", c.jobs);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, e.what());
    }

    c.model.validate();
    c.sim.validate();
    c.impulse.validate();
    if (c.resolution < 1) throw Error(ErrorKind::Config, "resolution must be at least 1");
    if (c.grid) c.grid->validate();
    if (c.sweep.N_Q < 1) throw Error(ErrorKind::Config, "sweep.N_Q must be at least 1");
    if (c.validate.coarse < 1 || c.validate.fine <= c.validate.coarse || c.validate.probes < 1)
        throw Error(ErrorKind::Config, "validate needs 1 <= coarse < fine and at least one probe");
    for (double d : c.delays)
        if (!(d >= 0)) throw Error(ErrorKind::Config, "delays must be non-negative");
    return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, "config '" + path.string() + "': " + e.what());
    }
    return parse_run_config(j, path.parent_path());
}

/// Loads one agent's table (digest-checked against the model) into a controller spec.
inline IcSpec make_ic_spec(const RunConfig& c, const AgentConfig& a) {
    auto table = std::make_shared<const ClassifierTable>(load_table(a.table, c.model));
    if (table->mode != c.mode) throw Error(ErrorKind::Config, "table '" + a.table.string() + "' has a different mode");
    ImpulseParams p = c.impulse;
    if (a.P) p.P = *a.P;
    return IcSpec{std::move(table), a.J, p, a.tau_d};
}

inline SweepConfig make_sweep_config(const RunConfig& c) {
    SweepConfig s;
    s.Q_max = c.sweep.Q_max;
    s.N_Q = c.sweep.N_Q;
    s.side = c.sweep.side;
    s.disturbance_width = c.sweep.disturbance_width.value_or(c.sim.dt);
    if (c.agent1) s.agent1 = make_ic_spec(c, *c.agent1);
    if (c.agent2) s.agent2 = make_ic_spec(c, *c.agent2);
    s.model = c.model;
    s.sim = c.sim;
    s.jobs = c.jobs;
    return s;
}

} // namespace cipw

#endif // CIPW_CONFIG_HPP

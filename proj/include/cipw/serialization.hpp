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

#ifndef CIPW_SERIALIZATION_HPP
#define CIPW_SERIALIZATION_HPP

#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cipw/error.hpp"
#include "cipw/grid.hpp"
#include "cipw/params.hpp"

namespace cipw {

using json = nlohmann::json;

namespace detail {

/// Rejects keys outside `allowed` so that misspelled config entries fail loudly.
inline void check_keys(const json& j, std::string_view what, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw Error(ErrorKind::Config, std::string(what) + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw Error(ErrorKind::Config, "unknown key '" + key + "' in " + std::string(what));
    }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, std::string("bad value for '") + key + "': " + e.what());
    }
}

} // namespace detail

inline void to_json(json& j, const PendulumParams& p) {
    j = {{"m_theta", p.m_theta}, {"m_x", p.m_x}, {"r", p.r}, {"g", p.g}, {"c_x", p.c_x}, {"c_theta", p.c_theta}};
}
inline void from_json(const json& j, PendulumParams& p) {
    detail::check_keys(j, "pendulum", {"m_theta", "m_x", "r", "g", "c_x", "c_theta"});
    detail::read_opt(j, "m_theta", p.m_theta);
    detail::read_opt(j, "m_x", p.m_x);
    detail::read_opt(j, "r", p.r);
    detail::read_opt(j, "g", p.g);
    detail::read_opt(j, "c_x", p.c_x);
    detail::read_opt(j, "c_theta", p.c_theta);
}

inline void to_json(json& j, const RodParams& p) { j = {{"w0", p.w0}, {"k_w", p.k_w}, {"c_w", p.c_w}}; }
inline void from_json(const json& j, RodParams& p) {
    detail::check_keys(j, "rod", {"w0", "k_w", "c_w"});
    detail::read_opt(j, "w0", p.w0);
    detail::read_opt(j, "k_w", p.k_w);
    detail::read_opt(j, "c_w", p.c_w);
}

inline void to_json(json& j, const FloorParams& p) {
    j = {{"k_f", p.k_f}, {"c_f", p.c_f}, {"mu", p.mu}, {"sigma", p.sigma}};
}
inline void from_json(const json& j, FloorParams& p) {
    detail::check_keys(j, "floor", {"k_f", "c_f", "mu", "sigma"});
    detail::read_opt(j, "k_f", p.k_f);
    detail::read_opt(j, "c_f", p.c_f);
    detail::read_opt(j, "mu", p.mu);
    detail::read_opt(j, "sigma", p.sigma);
}

inline void to_json(json& j, const StandingControlParams& p) {
    j = {{"K_p", p.K_p}, {"K_d", p.K_d}, {"delta_theta", p.delta_theta}, {"alpha", p.alpha}};
}
inline void from_json(const json& j, StandingControlParams& p) {
    detail::check_keys(j, "standing", {"K_p", "K_d", "delta_theta", "alpha"});
    detail::read_opt(j, "K_p", p.K_p);
    detail::read_opt(j, "K_d", p.K_d);
    detail::read_opt(j, "delta_theta", p.delta_theta);
    detail::read_opt(j, "alpha", p.alpha);
}

inline void to_json(json& j, const ModelParams& p) {
    j = {{"pendulum", p.pendulum}, {"rod", p.rod}, {"floor", p.floor}, {"standing", p.standing}};
}
inline void from_json(const json& j, ModelParams& p) {
    detail::check_keys(j, "model", {"pendulum", "rod", "floor", "standing"});
    detail::read_opt(j, "pendulum", p.pendulum);
    detail::read_opt(j, "rod", p.rod);
    detail::read_opt(j, "floor", p.floor);
    detail::read_opt(j, "standing", p.standing);
}

inline void to_json(json& j, const ImpulseParams& p) {
    j = {{"P", p.P}, {"delta_tau", p.delta_tau}, {"tau_G", p.tau_G}};
}
inline void from_json(const json& j, ImpulseParams& p) {
    detail::check_keys(j, "impulse", {"P", "delta_tau", "tau_G"});
    detail::read_opt(j, "P", p.P);
    detail::read_opt(j, "delta_tau", p.delta_tau);
    detail::read_opt(j, "tau_G", p.tau_G);
}

inline void to_json(json& j, const ConvergenceSettings& c) {
    j = {{"omega_tol", c.omega_tol}, {"v_tol", c.v_tol}, {"t_dwell", c.t_dwell}};
}
inline void from_json(const json& j, ConvergenceSettings& c) {
    detail::check_keys(j, "convergence", {"omega_tol", "v_tol", "t_dwell"});
    detail::read_opt(j, "omega_tol", c.omega_tol);
    detail::read_opt(j, "v_tol", c.v_tol);
    detail::read_opt(j, "t_dwell", c.t_dwell);
}

inline void to_json(json& j, const SimSettings& s) {
    j = {{"dt", s.dt}, {"t_end", s.t_end}, {"convergence", s.convergence}};
}
inline void from_json(const json& j, SimSettings& s) {
    detail::check_keys(j, "simulation", {"dt", "t_end", "convergence"});
    detail::read_opt(j, "dt", s.dt);
    detail::read_opt(j, "t_end", s.t_end);
    detail::read_opt(j, "convergence", s.convergence);
}

inline void to_json(json& j, const GridSpec& g) {
    j = {{"lower", g.lower}, {"upper", g.upper}, {"resolution", g.resolution}};
}
inline void from_json(const json& j, GridSpec& g) {
    detail::check_keys(j, "grid", {"lower", "upper", "resolution"});
    detail::read_opt(j, "lower", g.lower);
    detail::read_opt(j, "upper", g.upper);
    detail::read_opt(j, "resolution", g.resolution);
}

/// Canonical text: sorted keys, no insignificant whitespace, shortest
/// round-trip number formatting.
inline std::string canonical_dump(const json& j) { return j.dump(); }

} // namespace cipw

#endif // CIPW_SERIALIZATION_HPP

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

#ifndef CIPW_CONTROLLER_HPP
#define CIPW_CONTROLLER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cipw/equilibrium.hpp"
#include "cipw/error.hpp"
#include "cipw/measurement.hpp"
#include "cipw/params.hpp"
#include "cipw/simulate.hpp"
#include "cipw/table.hpp"

namespace cipw {

/// Subset J of {1, ..., 9} of equilibria an agent is aiming for.
class SelectorSet {
public:
    SelectorSet() = default;
    SelectorSet(std::initializer_list<int> members) {
        for (int nu : members) insert(nu);
    }
    explicit SelectorSet(const std::vector<int>& members) {
        for (int nu : members) insert(nu);
    }

    void insert(int nu) {
        if (nu < 1 || nu > 9) throw Error(ErrorKind::InvalidArgument, "selector members must be in 1..9");
        mask_ |= static_cast<std::uint16_t>(1u << nu);
    }
    bool contains(EquilibriumIndex nu) const { return nu.classified() && ((mask_ >> nu.value()) & 1u); }
    bool empty() const { return mask_ == 0; }

    std::vector<int> members() const {
        std::vector<int> out;
        for (int nu = 1; nu <= 9; ++nu)
            if ((mask_ >> nu) & 1u) out.push_back(nu);
        return out;
    }

    friend bool operator==(const SelectorSet&, const SelectorSet&) = default;

private:
    std::uint16_t mask_ = 0;
};

/// S_J(nu): 1 iff nu is a selected equilibrium. Unclassified never selects.
inline bool selector(EquilibriumIndex nu, const SelectorSet& J) { return J.contains(nu); }

/// Goal set seen from the mirrored frame x' = -(x2, x1); maps {2,3} <-> {4,7}.
inline SelectorSet mirror_set(const SelectorSet& J) {
    SelectorSet out;
    for (int nu : J.members()) out.insert(EquilibriumIndex(nu).mirrored().value());
    return out;
}

/**
 * Impulse generator: an AND gate between the selector bit and the relaxation
 * timer T_G, and a pulse timer T_I. The gate is sampled once per step; a
 * 0 -> 1 rise of the gated bit at t_r fires a pulse of height 1/delta_tau on
 * [t_r, t_r + delta_tau) and closes the gate on (t_r, t_r + tau_G).
 */
struct ImpulseGeneratorState {
    std::optional<double> firing_until;
    std::optional<double> refractory_until;
    std::optional<double> last_rise_time;
    bool gate_prev = false;
};

inline double impulse_generator_step(ImpulseGeneratorState& g, bool delta, double t, const ImpulseParams& p) {
    const double eps = 1e-9 * p.delta_tau;
    const bool refractory = g.last_rise_time && t > *g.last_rise_time + eps && t < *g.refractory_until - eps;
    const bool gate = delta && !refractory;
    if (gate && !g.gate_prev) {
        g.last_rise_time = t;
        g.firing_until = t + p.delta_tau;
        g.refractory_until = t + p.tau_G;
    }
    g.gate_prev = gate;
    const bool firing = g.firing_until && t >= *g.last_rise_time - eps && t < *g.firing_until - eps;
    return firing ? 1.0 / p.delta_tau : 0.0;
}

/// Step-indexed history of measured states for the delayed controller.
class DelayBuffer {
public:
    DelayBuffer(double tau_d, double dt) {
        if (!(tau_d >= 0.0) || !(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "delay must be >= 0 and dt > 0");
        delay_steps_ = static_cast<std::size_t>(std::lround(tau_d / dt));
        ring_.resize(delay_steps_ + 1);
    }

    std::size_t delay_steps() const { return delay_steps_; }

    void push(const StateVector& s) {
        ring_[head_] = s;
        head_ = (head_ + 1) % ring_.size();
        if (count_ < ring_.size()) ++count_;
    }

    /// State delay_steps() pushes ago, or the oldest one during warm-up.
    const StateVector& delayed() const {
        if (count_ == 0) throw Error(ErrorKind::InvalidArgument, "delay buffer is empty");
        const std::size_t n = ring_.size();
        const std::size_t newest = (head_ + n - 1) % n;
        const std::size_t back = std::min(delay_steps_, count_ - 1);
        return ring_[(newest + n - back) % n];
    }

private:
    std::size_t delay_steps_ = 0;
    std::vector<StateVector> ring_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
};

/// P (G o S_J o C*)(x): torque of one intelligent-controller step for agent 1.
inline double ic_output(const StateVector& measured, const ClassifierTable& table, const MeasurementMap& map,
                        const SelectorSet& J, ImpulseGeneratorState& g, const ImpulseParams& p, double t,
                        bool* out_of_range = nullptr) {
    const EquilibriumIndex nu = quantized_classify(measured, table, map);
    if (out_of_range) *out_of_range = !cell_of(map.measure(measured).values(), table.grid).has_value();
    return p.P * impulse_generator_step(g, selector(nu, J), t, p);
}

/// Configuration of one agent's (delayed) intelligent controller.
struct IcSpec {
    std::shared_ptr<const ClassifierTable> table;
    SelectorSet J;          ///< goal set in the real frame ({2,3} for agent 1, {4,7} for agent 2)
    ImpulseParams impulse;  ///< P is agent 1's impulse; agent 2 applies -P
    double tau_d = 0.0;     ///< classifier delay [s]
};

/**
 * Delayed intelligent controller for either agent. Agent 2 reuses the table
 * learned for agent 1 by classifying the mirrored state x' = -(x2, x1) and
 * firing with the opposite sign. The generator runs in present time.
 */
class IntelligentController {
public:
    IntelligentController(Agent agent, IcSpec spec, MeasurementMap map, double dt)
        : agent_(agent), spec_(std::move(spec)), map_(map), buffer_(spec_.tau_d, dt) {
        if (!spec_.table) throw Error(ErrorKind::InvalidArgument, "controller needs a classifier table");
        if (spec_.table->mode != map_.mode) throw Error(ErrorKind::InvalidArgument, "table and measurement modes differ");
        if (agent_ == Agent::Second && map_.mode != MeasurementMode::FourDim)
            throw Error(ErrorKind::InvalidArgument, "mirrored reuse requires four-dim measurement");
        if (spec_.J.empty()) throw Error(ErrorKind::InvalidArgument, "selector set must not be empty");
        spec_.impulse.validate();
        local_J_ = agent_ == Agent::First ? spec_.J : mirror_set(spec_.J);
    }

    /// Torque on this agent's pendulum for the step starting at `t`.
    double step(const StateVector& state, double t) {
        buffer_.push(state);
        const StateVector& past = buffer_.delayed();
        const StateVector local = agent_ == Agent::First ? past : mirror_transform(past);
        bool outside = false;
        const double u = ic_output(local, *spec_.table, map_, local_J_, gen_, spec_.impulse, t, &outside);
        out_of_range_steps_ += outside;
        last_fired_ = u != 0.0;
        fired_ = fired_ || last_fired_;
        return agent_ == Agent::First ? u : -u;
    }

    Agent agent() const { return agent_; }
    bool fired() const { return fired_; }
    bool last_fired() const { return last_fired_; }
    std::size_t out_of_range_steps() const { return out_of_range_steps_; }
    std::size_t delay_steps() const { return buffer_.delay_steps(); }
    const ImpulseGeneratorState& generator() const { return gen_; }

private:
    Agent agent_;
    IcSpec spec_;
    MeasurementMap map_;
    DelayBuffer buffer_;
    SelectorSet local_J_;
    ImpulseGeneratorState gen_;
    bool fired_ = false;
    bool last_fired_ = false;
    std::size_t out_of_range_steps_ = 0;
};

} // namespace cipw

#endif // CIPW_CONTROLLER_HPP

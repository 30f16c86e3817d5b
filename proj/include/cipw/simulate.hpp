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

#ifndef CIPW_SIMULATE_HPP
#define CIPW_SIMULATE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include "cipw/equilibrium.hpp"
#include "cipw/integrator.hpp"
#include "cipw/params.hpp"
#include "cipw/standing.hpp"
#include "cipw/state.hpp"

namespace cipw {

/// What a controller sees at the start of step `step` (t = step * dt).
struct StepContext {
    long step;
    double t;
    double dt;
    const StateVector& state;
};

/// Torque added on top of standing control and held over one step.
struct StepControl {
    Torques torque;
    std::array<bool, 2> fired{false, false};
};

using StepController = std::function<StepControl(const StepContext&)>;

inline StepControl no_control(const StepContext&) { return {}; }

struct TrajectorySample {
    double t;
    StateVector state;
    Torques total_torque; ///< standing + held, evaluated at `state`
    std::array<bool, 2> fired;
};

using TrajectoryObserver = std::function<void(const TrajectorySample&)>;

struct SimResult {
    StateVector final_state;
    EquilibriumIndex nu;
    double t_final = 0.0;   ///< time at which the run stopped
    bool converged = false;
    bool fired_first = false;
    bool fired_second = false;
};

/**
 * Fixed-step integration of the closed loop from s0. The controller is polled
 * once per step; the run stops as soon as the equilibrium detector confirms
 * convergence, otherwise at t_end with nu = 0.
 */
inline SimResult simulate(const StateVector& s0, const StepController& controller, const ModelParams& mp,
                          const SimSettings& sim, const TrajectoryObserver& observer = {}) {
    sim.validate();
    if (!s0.all_finite()) throw Error(ErrorKind::NonFiniteState, "initial state has non-finite component");

    EquilibriumDetector detector(sim.convergence, sim.dt);
    SimResult out;
    StateVector s = s0;
    const long n = sim.steps();

    auto emit = [&](double t, const StateVector& st, const StepControl& c) {
        if (observer) observer({t, st, c.torque + standing_torques(st, mp.standing), c.fired});
    };

    if (auto nu = detector.update(s)) {
        out = {s, *nu, 0.0, true};
        emit(0.0, s, {});
        return out;
    }
    for (long k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * sim.dt;
        const StepControl c = controller ? controller({k, t, sim.dt, s}) : StepControl{};
        out.fired_first = out.fired_first || c.fired[0];
        out.fired_second = out.fired_second || c.fired[1];
        emit(t, s, c);

        s = rkg4_step(s, [&](const StateVector& y) { return closed_loop_rhs(y, c.torque, mp); }, sim.dt);

        const double t_next = static_cast<double>(k + 1) * sim.dt;
        if (!s.all_finite()) {
            std::ostringstream msg;
            msg << "state became non-finite at t = " << t_next << " s";
            throw Error(ErrorKind::NonFiniteState, msg.str());
        }
        for (Agent a : {Agent::First, Agent::Second}) {
            if (std::abs(s.theta(a)) > std::numbers::pi) {
                std::ostringstream msg;
                msg << "pendulum angle left (-pi, pi] at t = " << t_next << " s";
                throw Error(ErrorKind::AngleOutOfBranch, msg.str());
            }
        }
        if (auto nu = detector.update(s)) {
            out.final_state = s;
            out.nu = *nu;
            out.t_final = t_next;
            out.converged = true;
            emit(t_next, s, {});
            return out;
        }
    }
    out.final_state = s;
    out.nu = EquilibriumIndex::unclassified();
    out.t_final = static_cast<double>(n) * sim.dt;
    out.converged = false;
    emit(out.t_final, s, {});
    return out;
}

/// Rectangular pulse of unit area: 1/width on [start, start + width).
/// Evaluated on the step grid, so `t` is the step start time.
inline double unit_pulse(double t, double start, double width) {
    const double eps = 1e-9 * width;
    return (t >= start - eps && t < start + width - eps) ? 1.0 / width : 0.0;
}

} // namespace cipw

#endif // CIPW_SIMULATE_HPP

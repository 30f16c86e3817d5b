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

#ifndef CIPW_STANDING_HPP
#define CIPW_STANDING_HPP

#include "cipw/dynamics.hpp"
#include "cipw/params.hpp"
#include "cipw/state.hpp"

namespace cipw {

/// Smooth trapezoid of unit height on |theta| < delta_theta.
inline double trap(double theta, double delta_theta, double alpha) {
    return smooth_step(theta + delta_theta, alpha) * smooth_step(-theta + delta_theta, alpha);
}

/// Deadband PD: plain PD inside the deadband, cut off outside so the
/// pendulum is free to fall.
inline double pd_torque(double theta, double theta_dot, const StandingControlParams& p) {
    return trap(theta, p.delta_theta, p.alpha) * (-p.K_p * theta - p.K_d * theta_dot);
}

inline Torques standing_torques(const StateVector& s, const StandingControlParams& p) {
    return {pd_torque(s.theta(Agent::First), s.thetadot(Agent::First), p),
            pd_torque(s.theta(Agent::Second), s.thetadot(Agent::Second), p)};
}

/// Field of the closed loop with standing control evaluated continuously and
/// an extra torque held constant over the current step.
inline StateVector closed_loop_rhs(const StateVector& s, const Torques& held, const ModelParams& mp) {
    return eom_rhs(s, held + standing_torques(s, mp.standing), mp);
}

} // namespace cipw

#endif // CIPW_STANDING_HPP

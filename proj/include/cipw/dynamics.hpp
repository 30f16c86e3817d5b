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

#ifndef CIPW_DYNAMICS_HPP
#define CIPW_DYNAMICS_HPP

#include <array>
#include <cmath>
#include <string>

#include "cipw/error.hpp"
#include "cipw/params.hpp"
#include "cipw/state.hpp"

namespace cipw {

/// Logistic step {1 + exp(-sigma s)}^-1, evaluated branchwise so that large
/// sigma never overflows exp().
inline double smooth_step(double s, double sigma) {
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-sigma * s));
    const double e = std::exp(sigma * s);
    return e / (1.0 + e);
}

inline double smooth_sign(double s, double sigma) { return 2.0 * smooth_step(s, sigma) - 1.0; }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Tip position (X, Y) and velocity of one pendulum.
struct TipState {
    Vec2 pos;
    Vec2 vel;
};

inline TipState tip_kinematics(const StateVector& s, Agent a, const PendulumParams& p) {
    const double th = s.theta(a);
    const double w = s.thetadot(a);
    const double sn = std::sin(th);
    const double cs = std::cos(th);
    return {{s.x(a) + p.r * sn, p.r * cs}, {s.xdot(a) + p.r * w * cs, -p.r * w * sn}};
}

struct RodState {
    Vec2 w_vec;      ///< tip-1 -> tip-2 displacement
    double length;   ///< |w_vec|
    double rate;     ///< d|w_vec|/dt
    double tension;  ///< scalar p = -k_w (w - w0) - c_w wdot
    Vec2 force;      ///< p / w * w_vec; agent 1 receives -force, agent 2 +force
};

inline constexpr double kDegenerateRodLength = 1e-9;

inline RodState rod_force(const StateVector& s, const RodParams& rp, const PendulumParams& p) {
    const TipState t1 = tip_kinematics(s, Agent::First, p);
    const TipState t2 = tip_kinematics(s, Agent::Second, p);
    RodState rod{};
    rod.w_vec = {t2.pos.x - t1.pos.x, t2.pos.y - t1.pos.y};
    rod.length = std::hypot(rod.w_vec.x, rod.w_vec.y);
    if (!(rod.length >= kDegenerateRodLength))
        throw Error(ErrorKind::DegenerateRod, "tip distance " + std::to_string(rod.length) + " m");
    const Vec2 dw{t2.vel.x - t1.vel.x, t2.vel.y - t1.vel.y};
    rod.rate = (dw.x * rod.w_vec.x + dw.y * rod.w_vec.y) / rod.length;
    rod.tension = -rp.k_w * (rod.length - rp.w0) - rp.c_w * rod.rate;
    const double k = rod.tension / rod.length;
    rod.force = {k * rod.w_vec.x, k * rod.w_vec.y};
    return rod;
}

/// Penalty floor at Y = 0: normal force R and friction F on one tip.
struct FloorForce {
    double R = 0.0;
    double F = 0.0;
};

inline FloorForce floor_forces(const StateVector& s, Agent a, const FloorParams& fp, const PendulumParams& p) {
    const TipState tip = tip_kinematics(s, a, p);
    FloorForce out;
    out.R = smooth_step(-tip.pos.y, fp.sigma) * (-fp.k_f * tip.pos.y - fp.c_f * tip.vel.y);
    out.F = fp.mu == 0.0 ? 0.0 : -fp.mu * out.R * smooth_sign(tip.vel.x, fp.sigma);
    return out;
}

/// Total external force on each tip: rod reaction plus floor.
inline std::array<Vec2, 2> tip_forces(const StateVector& s, const ModelParams& mp) {
    const RodState rod = rod_force(s, mp.rod, mp.pendulum);
    const FloorForce fl1 = floor_forces(s, Agent::First, mp.floor, mp.pendulum);
    const FloorForce fl2 = floor_forces(s, Agent::Second, mp.floor, mp.pendulum);
    return {Vec2{-rod.force.x + fl1.F, -rod.force.y + fl1.R}, Vec2{rod.force.x + fl2.F, rod.force.y + fl2.R}};
}

/// Generalized accelerations (xddot, thetaddot) of one cart-pendulum under a
/// tip force and pendulum torque. The 2x2 mass matrix is inverted in closed form.
inline std::array<double, 2> agent_accelerations(double xdot, double th, double thdot, Vec2 f, double torque,
                                                 const PendulumParams& p) {
    const double sn = std::sin(th);
    const double cs = std::cos(th);
    const double m11 = p.m_x + p.m_theta;
    const double m12 = p.m_theta * p.r * cs;
    const double m22 = p.m_theta * p.r * p.r;
    const double det = m11 * m22 - m12 * m12;
    if (std::abs(det) < 1e-12 * m11 * m22)
        throw Error(ErrorKind::SingularMassMatrix, "determinant " + std::to_string(det));
    const double b1 = -p.c_x * xdot + f.x + p.m_theta * p.r * thdot * thdot * sn;
    const double b2 = -p.c_theta * thdot + p.r * (cs * f.x - sn * f.y) + torque + p.m_theta * p.g * p.r * sn;
    return {(m22 * b1 - m12 * b2) / det, (m11 * b2 - m12 * b1) / det};
}

/// Time derivative of the coupled state for given pendulum torques.
inline StateVector eom_rhs(const StateVector& s, const Torques& torque, const ModelParams& mp) {
    if (!s.all_finite()) throw Error(ErrorKind::NonFiniteState, "state has non-finite component");
    const auto forces = tip_forces(s, mp);
    StateVector d;
    for (Agent a : {Agent::First, Agent::Second}) {
        const auto acc = agent_accelerations(s.xdot(a), s.theta(a), s.thetadot(a), forces[static_cast<int>(a)],
                                             torque[a], mp.pendulum);
        d.x(a) = s.xdot(a);
        d.xdot(a) = acc[0];
        d.theta(a) = s.thetadot(a);
        d.thetadot(a) = acc[1];
    }
    return d;
}

/// Kinetic + gravitational energy of both agents plus rod elastic energy.
inline double mechanical_energy(const StateVector& s, const ModelParams& mp) {
    const PendulumParams& p = mp.pendulum;
    double e = 0.0;
    for (Agent a : {Agent::First, Agent::Second}) {
        const double v = s.xdot(a);
        const double w = s.thetadot(a);
        const double cs = std::cos(s.theta(a));
        e += 0.5 * (p.m_x + p.m_theta) * v * v + p.m_theta * p.r * cs * v * w + 0.5 * p.m_theta * p.r * p.r * w * w;
        e += p.m_theta * p.g * p.r * cs;
    }
    const TipState t1 = tip_kinematics(s, Agent::First, p);
    const TipState t2 = tip_kinematics(s, Agent::Second, p);
    const double len = std::hypot(t2.pos.x - t1.pos.x, t2.pos.y - t1.pos.y);
    e += 0.5 * mp.rod.k_w * (len - mp.rod.w0) * (len - mp.rod.w0);
    return e;
}

} // namespace cipw

#endif // CIPW_DYNAMICS_HPP

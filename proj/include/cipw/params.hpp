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

#ifndef CIPW_PARAMS_HPP
#define CIPW_PARAMS_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "cipw/error.hpp"

namespace cipw {

// Defaults for all parameter blocks reproduce the published setup, except
// that the pendulum and cart masses are the physically consistent pair
// (light pendulum, heavy cart); see README "Parameter notes".

struct PendulumParams {
    double m_theta = 0.067; ///< pendulum mass [kg]
    double m_x = 0.68;      ///< cart mass [kg]
    double r = 0.3;         ///< pendulum length [m]
    double g = 9.8;         ///< gravity [m/s^2]
    double c_x = 0.01;      ///< cart viscous coefficient [N s/m]
    double c_theta = 0.01;  ///< pendulum viscous coefficient [N m s]

    void validate() const {
        require(m_theta > 0 && m_x > 0 && r > 0 && g > 0, "pendulum masses, length and gravity must be positive");
        require(c_x >= 0 && c_theta >= 0, "pendulum viscous coefficients must be non-negative");
    }
    friend bool operator==(const PendulumParams&, const PendulumParams&) = default;
};

struct RodParams {
    double w0 = 1.0;     ///< natural length [m]
    double k_w = 5000.0; ///< spring coefficient [N/m]
    double c_w = 50.0;   ///< viscous coefficient [N s/m]

    void validate() const {
        require(w0 > 0, "rod natural length must be positive");
        require(k_w >= 0 && c_w >= 0, "rod coefficients must be non-negative");
    }
    friend bool operator==(const RodParams&, const RodParams&) = default;
};

struct FloorParams {
    double k_f = 500.0;  ///< penalty spring [N/m]
    double c_f = 10.0;   ///< penalty damper [N s/m]
    double mu = 0.0;     ///< Coulomb friction coefficient
    double sigma = 1e6;  ///< sigmoid steepness

    void validate() const {
        require(k_f >= 0 && c_f >= 0 && mu >= 0, "floor coefficients must be non-negative");
        require(sigma > 0, "floor sigmoid steepness must be positive");
    }
    friend bool operator==(const FloorParams&, const FloorParams&) = default;
};

/// Deadband PD standing control.
struct StandingControlParams {
    double K_p = 1.0;
    double K_d = 0.01;
    double delta_theta = std::numbers::pi / 6.0; ///< deadband half-width [rad]
    double alpha = 25.0;                         ///< trapezoid steepness

    void validate() const {
        require(K_p >= 0 && K_d >= 0, "standing gains must be non-negative");
        require(delta_theta > 0 && alpha > 0, "deadband half-width and steepness must be positive");
    }
    friend bool operator==(const StandingControlParams&, const StandingControlParams&) = default;
};

/// Everything the equations of motion depend on.
struct ModelParams {
    PendulumParams pendulum;
    RodParams rod;
    FloorParams floor;
    StandingControlParams standing;

    void validate() const {
        pendulum.validate();
        rod.validate();
        floor.validate();
        standing.validate();
    }
    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct ImpulseParams {
    double P = 0.06;          ///< angular impulse per firing [N m s]
    double delta_tau = 5e-4;  ///< pulse width [s]
    double tau_G = 5e-4;      ///< relaxation time [s]

    void validate() const {
        require(delta_tau > 0, "pulse width must be positive");
        require(tau_G >= delta_tau, "relaxation time must be at least the pulse width");
    }
    friend bool operator==(const ImpulseParams&, const ImpulseParams&) = default;
};

/// Gate for declaring a trajectory settled on one of the nine equilibria.
struct ConvergenceSettings {
    double omega_tol = 1e-3; ///< max |thetadot| [rad/s]
    double v_tol = 1e-3;     ///< max |xdot1 - xdot2| [m/s]
    double t_dwell = 0.5;    ///< how long both gates must hold [s]

    void validate() const {
        require(omega_tol > 0 && v_tol > 0, "convergence tolerances must be positive");
        require(t_dwell >= 0, "dwell time must be non-negative");
    }
    friend bool operator==(const ConvergenceSettings&, const ConvergenceSettings&) = default;
};

struct SimSettings {
    double dt = 5e-4;     ///< fixed integration step [s]
    double t_end = 60.0;  ///< horizon [s]
    ConvergenceSettings convergence;

    void validate() const {
        require(dt > 0, "dt must be positive");
        require(t_end >= dt, "horizon must be at least one step");
        convergence.validate();
    }

    /// Number of fixed steps covering [0, t_end].
    long steps() const { return std::lround(std::ceil(t_end / dt - 1e-9)); }

    friend bool operator==(const SimSettings&, const SimSettings&) = default;
};

} // namespace cipw

#endif // CIPW_PARAMS_HPP

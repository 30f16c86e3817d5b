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

#ifndef CIPW_MEASUREMENT_HPP
#define CIPW_MEASUREMENT_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "cipw/error.hpp"
#include "cipw/state.hpp"

namespace cipw {

enum class MeasurementMode {
    FourDim, ///< y = (th1, w1, th2, w2)
    SixDim,  ///< y = (x1, v1, th1, w1, th2, w2)
};

inline std::string_view to_string(MeasurementMode m) { return m == MeasurementMode::FourDim ? "four-dim" : "six-dim"; }

inline MeasurementMode measurement_mode_from_string(std::string_view s) {
    if (s == "four-dim") return MeasurementMode::FourDim;
    if (s == "six-dim") return MeasurementMode::SixDim;
    throw Error(ErrorKind::Config, "unknown measurement mode '" + std::string(s) + "'");
}

inline constexpr std::size_t dimension(MeasurementMode m) { return m == MeasurementMode::FourDim ? 4 : 6; }

/// Measured vector y = H x, up to six components.
struct Measurement {
    std::array<double, 6> data{};
    std::size_t size = 0;

    double operator[](std::size_t i) const { return data[i]; }
    double& operator[](std::size_t i) { return data[i]; }
    std::span<const double> values() const { return {data.data(), size}; }
    friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Linear measurement H and its rigid-rod inverse h.
struct MeasurementMap {
    MeasurementMode mode = MeasurementMode::FourDim;
    double w0 = 1.0;
    double r = 0.3;

    std::size_t dim() const { return dimension(mode); }

    Measurement measure(const StateVector& s) const {
        Measurement y;
        y.size = dim();
        const auto th = [&](Agent a) { return std::array{s.theta(a), s.thetadot(a)}; };
        const auto a1 = th(Agent::First);
        const auto a2 = th(Agent::Second);
        if (mode == MeasurementMode::FourDim) {
            y.data = {a1[0], a1[1], a2[0], a2[1], 0.0, 0.0};
        } else {
            y.data = {s.x(Agent::First), s.xdot(Agent::First), a1[0], a1[1], a2[0], a2[1]};
        }
        return y;
    }

    /**
     * State consistent with y and a rod of fixed length w0: cart 2 position
     * and velocity follow from the tip-distance constraint. In four-dim mode
     * cart 1 is placed at rest at the origin.
     */
    StateVector reconstruct(const Measurement& y) const {
        if (y.size != dim()) throw Error(ErrorKind::InvalidArgument, "measurement dimension mismatch");
        const std::size_t o = mode == MeasurementMode::FourDim ? 0 : 2;
        const double x1 = mode == MeasurementMode::FourDim ? 0.0 : y[0];
        const double v1 = mode == MeasurementMode::FourDim ? 0.0 : y[1];
        const double th1 = y[o + 0], w1 = y[o + 1], th2 = y[o + 2], w2 = y[o + 3];

        const double dc = std::cos(th2) - std::cos(th1);
        const double arg = w0 * w0 - r * r * dc * dc;
        if (!(arg > 0.0)) throw Error(ErrorKind::ConstraintInfeasible, "rigid rod cannot span the two tips");
        const double root = std::sqrt(arg);

        StateVector s;
        s.x(Agent::First) = x1;
        s.xdot(Agent::First) = v1;
        s.theta(Agent::First) = th1;
        s.thetadot(Agent::First) = w1;
        s.x(Agent::Second) = x1 - r * (std::sin(th2) - std::sin(th1)) + root;
        s.xdot(Agent::Second) = v1 - r * (w2 * std::cos(th2) - w1 * std::cos(th1))
                                + r * r * dc * (w2 * std::sin(th2) - w1 * std::sin(th1)) / root;
        s.theta(Agent::Second) = th2;
        s.thetadot(Agent::Second) = w2;
        return s;
    }
};

/// x' = -(x2, x1): the same configuration seen from the other agent's side.
inline StateVector mirror_transform(const StateVector& s) {
    StateVector m;
    for (std::size_t i = 0; i < 4; ++i) {
        m[i] = -s[i + 4];
        m[i + 4] = -s[i];
    }
    return m;
}

} // namespace cipw

#endif // CIPW_MEASUREMENT_HPP

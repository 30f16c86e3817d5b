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

#ifndef CIPW_STATE_HPP
#define CIPW_STATE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace cipw {

/// Agent selector. Agent 1 is the left-hand pendulum, agent 2 the right-hand one.
enum class Agent : int { First = 0, Second = 1 };

/**
 * Full state of the coupled pair:
 * (x1, v1, th1, w1, x2, v2, th2, w2) where x is the cart displacement [m],
 * v the cart velocity [m/s], th the pendulum angle from vertical [rad] and
 * w its angular velocity [rad/s].
 */
struct StateVector {
    static constexpr std::size_t kDim = 8;
    std::array<double, kDim> v{};

    constexpr double& operator[](std::size_t i) { return v[i]; }
    constexpr double operator[](std::size_t i) const { return v[i]; }

    constexpr double& x(Agent a) { return v[base(a) + 0]; }
    constexpr double& xdot(Agent a) { return v[base(a) + 1]; }
    constexpr double& theta(Agent a) { return v[base(a) + 2]; }
    constexpr double& thetadot(Agent a) { return v[base(a) + 3]; }
    constexpr double x(Agent a) const { return v[base(a) + 0]; }
    constexpr double xdot(Agent a) const { return v[base(a) + 1]; }
    constexpr double theta(Agent a) const { return v[base(a) + 2]; }
    constexpr double thetadot(Agent a) const { return v[base(a) + 3]; }

    bool all_finite() const {
        for (double c : v)
            if (!std::isfinite(c)) return false;
        return true;
    }

    friend constexpr bool operator==(const StateVector&, const StateVector&) = default;

    constexpr StateVector& operator+=(const StateVector& o) {
        for (std::size_t i = 0; i < kDim; ++i) v[i] += o.v[i];
        return *this;
    }
    constexpr StateVector& operator-=(const StateVector& o) {
        for (std::size_t i = 0; i < kDim; ++i) v[i] -= o.v[i];
        return *this;
    }
    constexpr StateVector& operator*=(double s) {
        for (double& c : v) c *= s;
        return *this;
    }
    friend constexpr StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
    friend constexpr StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
    friend constexpr StateVector operator*(double s, StateVector a) { return a *= s; }
    friend constexpr StateVector operator*(StateVector a, double s) { return a *= s; }

    /// Upright pair at rest with the rod at natural length: (0,0,0,0, w0,0,0,0).
    static constexpr StateVector trivial(double w0) {
        StateVector s;
        s.v[4] = w0;
        return s;
    }

private:
    static constexpr std::size_t base(Agent a) { return a == Agent::First ? 0 : 4; }
};

inline std::ostream& operator<<(std::ostream& os, const StateVector& s) {
    os << '(';
    for (std::size_t i = 0; i < StateVector::kDim; ++i) os << (i ? ", " : "") << s.v[i];
    return os << ')';
}

/// Control torques (T1, T2) acting on the pendulum angles [N m].
struct Torques {
    double first = 0.0;
    double second = 0.0;

    double operator[](Agent a) const { return a == Agent::First ? first : second; }
    double& operator[](Agent a) { return a == Agent::First ? first : second; }

    friend Torques operator+(Torques a, const Torques& b) { return {a.first + b.first, a.second + b.second}; }
    friend bool operator==(const Torques&, const Torques&) = default;
};

} // namespace cipw

#endif // CIPW_STATE_HPP

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

#ifndef CIPW_INTEGRATOR_HPP
#define CIPW_INTEGRATOR_HPP

#include <concepts>
#include <numbers>

namespace cipw {

template <typename S>
concept VectorSpaceState = requires(S a, S b, double k) {
    { a + b } -> std::convertible_to<S>;
    { k * a } -> std::convertible_to<S>;
};

/**
 * One step of the fourth-order Runge-Kutta-Gill scheme for an autonomous
 * field y' = f(y):
 *
 *   k1 = h f(y)
 *   k2 = h f(y + k1/2)
 *   k3 = h f(y + (-1/2 + 1/sqrt2) k1 + (1 - 1/sqrt2) k2)
 *   k4 = h f(y - k2/sqrt2 + (1 + 1/sqrt2) k3)
 *   y+ = y + (k1 + (2 - sqrt2) k2 + (2 + sqrt2) k3 + k4) / 6
 *
 * The operation order is fixed, so identical inputs give bit-identical output.
 */
template <VectorSpaceState S, typename Field>
    requires std::invocable<Field&, const S&>
S rkg4_step(const S& y, Field&& f, double h) {
    constexpr double r2 = std::numbers::sqrt2;
    constexpr double ir2 = 1.0 / std::numbers::sqrt2;
    const S k1 = h * f(y);
    const S k2 = h * f(y + 0.5 * k1);
    const S k3 = h * f(y + (ir2 - 0.5) * k1 + (1.0 - ir2) * k2);
    const S k4 = h * f(y + (-ir2) * k2 + (1.0 + ir2) * k3);
    return y + (1.0 / 6.0) * (k1 + (2.0 - r2) * k2 + (2.0 + r2) * k3 + k4);
}

} // namespace cipw

#endif // CIPW_INTEGRATOR_HPP

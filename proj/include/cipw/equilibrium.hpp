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

#ifndef CIPW_EQUILIBRIUM_HPP
#define CIPW_EQUILIBRIUM_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>

#include "cipw/error.hpp"
#include "cipw/params.hpp"
#include "cipw/state.hpp"

namespace cipw {

/// Per-agent rest status: standing (theta ~ 0), fallen toward -pi/2, fallen toward +pi/2.
enum class AgentStatus : int { Standing = 0, FallenNegative = 1, FallenPositive = 2 };

/// Nearest of {-pi/2, 0, +pi/2}. Angles slightly past +-pi/2 (the penalty
/// floor lets the tip sink a little) still bin to the fallen status.
inline AgentStatus angle_status(double theta) {
    constexpr double q = std::numbers::pi / 4.0;
    if (theta <= -q) return AgentStatus::FallenNegative;
    if (theta >= q) return AgentStatus::FallenPositive;
    return AgentStatus::Standing;
}

/**
 * Index of one of the nine stable equilibria, nu = 3a + b + 1 with a, b the
 * statuses of agent 1 and agent 2; nu = 0 means unclassified / no convergence.
 * Transposing the 3x3 status matrix swaps the agents: 2,3 <-> 4,7.
 */
class EquilibriumIndex {
public:
    constexpr EquilibriumIndex() = default;
    explicit constexpr EquilibriumIndex(int nu) : nu_(nu) {
        if (nu < 0 || nu > 9) throw Error(ErrorKind::OutOfRange, "equilibrium index must be in 0..9");
    }
    static constexpr EquilibriumIndex from_status(AgentStatus a, AgentStatus b) {
        return EquilibriumIndex(3 * static_cast<int>(a) + static_cast<int>(b) + 1);
    }
    static constexpr EquilibriumIndex unclassified() { return EquilibriumIndex(); }

    constexpr int value() const { return nu_; }
    constexpr bool classified() const { return nu_ != 0; }
    constexpr AgentStatus first() const { return static_cast<AgentStatus>((nu_ - 1) / 3); }
    constexpr AgentStatus second() const { return static_cast<AgentStatus>((nu_ - 1) % 3); }

    /// Transpose of the 3x3 status matrix: nu = 3a + b + 1 -> 3b + a + 1.
    constexpr EquilibriumIndex transposed() const {
        return classified() ? from_status(second(), first()) : EquilibriumIndex();
    }

    /// The equilibrium reached by the mirrored system x' = -(x2, x1): agents
    /// swap and each fall direction flips sign.
    constexpr EquilibriumIndex mirrored() const {
        return classified() ? from_status(flip(second()), flip(first())) : EquilibriumIndex();
    }

    friend constexpr bool operator==(EquilibriumIndex, EquilibriumIndex) = default;

private:
    static constexpr AgentStatus flip(AgentStatus s) {
        switch (s) {
            case AgentStatus::FallenNegative: return AgentStatus::FallenPositive;
            case AgentStatus::FallenPositive: return AgentStatus::FallenNegative;
            default: return s;
        }
    }

    int nu_ = 0;
};

enum class Outcome { BothStanding, FirstWins, SecondWins, DoubleFall, Unresolved };

inline std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::BothStanding: return "draw-both-standing";
        case Outcome::FirstWins: return "agent1-wins";
        case Outcome::SecondWins: return "agent2-wins";
        case Outcome::DoubleFall: return "double-fall";
        case Outcome::Unresolved: return "unresolved";
    }
    return "unresolved";
}

/// Competitive reading of the equilibria: the agent left standing wins.
struct WinLossMatrix {
    static Outcome outcome(EquilibriumIndex nu) {
        if (!nu.classified()) return Outcome::Unresolved;
        const bool s1 = nu.first() == AgentStatus::Standing;
        const bool s2 = nu.second() == AgentStatus::Standing;
        if (s1 && s2) return Outcome::BothStanding;
        if (s1) return Outcome::FirstWins;
        if (s2) return Outcome::SecondWins;
        return Outcome::DoubleFall;
    }

    /// Human-readable label. Pull/push wording is descriptive only: a loser
    /// lying toward the winner was pulled, one lying away from it was pushed.
    static std::string_view label(EquilibriumIndex nu) {
        static constexpr std::string_view labels[10] = {
            "unresolved",
            "both standing",
            "agent 1 wins by pulling",
            "agent 1 wins by pushing",
            "agent 2 wins by pushing",
            "both fallen leftward",
            "both fallen apart",
            "agent 2 wins by pulling",
            "both fallen together",
            "both fallen rightward",
        };
        return labels[nu.value()];
    }
};

/// Instantaneous classification; nullopt while any rate gate is open.
/// The cart gate looks at the relative cart velocity: a common drift of the
/// pair is a neutral direction (no restoring force on the carts) that only
/// the weak cart viscosity removes, and it carries no win/loss meaning.
inline std::optional<EquilibriumIndex> classify_at_rest(const StateVector& s, const ConvergenceSettings& c) {
    const double w = std::max(std::abs(s.thetadot(Agent::First)), std::abs(s.thetadot(Agent::Second)));
    const double v = std::abs(s.xdot(Agent::First) - s.xdot(Agent::Second));
    if (!(w < c.omega_tol && v < c.v_tol)) return std::nullopt;
    return EquilibriumIndex::from_status(angle_status(s.theta(Agent::First)), angle_status(s.theta(Agent::Second)));
}

/**
 * Dwell-window convergence detector. Feed it one state per integration step;
 * it reports an index once the rate gates have held, with an unchanged angle
 * classification, for at least t_dwell.
 */
class EquilibriumDetector {
public:
    EquilibriumDetector(ConvergenceSettings c, double dt)
        : c_(c), dwell_steps_(std::lround(std::ceil(c.t_dwell / dt - 1e-9))) {}

    std::optional<EquilibriumIndex> update(const StateVector& s) {
        const auto nu = classify_at_rest(s, c_);
        if (!nu || (calm_steps_ > 0 && *nu != candidate_)) {
            calm_steps_ = 0;
            if (!nu) return std::nullopt;
        }
        candidate_ = *nu;
        ++calm_steps_;
        if (calm_steps_ > dwell_steps_) return candidate_;
        return std::nullopt;
    }

    void reset() { calm_steps_ = 0; }

private:
    ConvergenceSettings c_;
    long dwell_steps_;
    long calm_steps_ = 0;
    EquilibriumIndex candidate_;
};

} // namespace cipw

#endif // CIPW_EQUILIBRIUM_HPP

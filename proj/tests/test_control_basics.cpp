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

#include <cipw/equilibrium.hpp>
#include <cipw/learning.hpp>
#include <cipw/simulate.hpp>
#include <cipw/standing.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace cipw;

namespace {

double logistic(double s) { return 1.0 / (1.0 + std::exp(-s)); }

} // namespace

TEST(Trap, ClosedFormValues) {
    const double dth = std::numbers::pi / 6;
    EXPECT_NEAR(trap(0.0, dth, 25.0), std::pow(1.0 + std::exp(-25.0 * dth), -2.0), 1e-15);
    EXPECT_NEAR(trap(0.0, dth, 25.0), 0.99999, 1e-5);
    EXPECT_LT(trap(10.0, dth, 25.0), 1e-4);
    EXPECT_LT(trap(-10.0, dth, 25.0), 1e-4);
    for (double th : {0.05, 0.3, 0.52, 0.7, 2.0, 3.1}) EXPECT_EQ(trap(th, dth, 25.0), trap(-th, dth, 25.0));
}

TEST(PdTorque, Values) {
    StandingControlParams p;
    EXPECT_EQ(pd_torque(0.0, 0.0, p), 0.0);
    const double t01 = logistic(25.0 * (0.1 + p.delta_theta)) * logistic(25.0 * (p.delta_theta - 0.1));
    EXPECT_NEAR(pd_torque(0.1, 0.0, p), -0.1 * t01, 1e-15);
    EXPECT_NEAR(pd_torque(0.1, 0.0, p), -0.099997, 1e-6);
    for (double w : {-900.0, -50.0, 0.0, 30.0, 900.0}) {
        if (std::abs(-1.0 - p.K_d * w) <= 10.0) {
            EXPECT_LT(std::abs(pd_torque(1.0, w, p)), 1e-3);
        }
    }
}

TEST(PdTorque, TailAtFiveOverAlphaIsExactlyLogisticOfMinusFive) {
    // The trapezoid at delta_theta + 5/alpha equals U(2 delta_theta + 5/alpha) / (1 + e^5),
    // independently of alpha up to the first factor.
    StandingControlParams p;
    const double th = p.delta_theta + 5.0 / p.alpha;
    const double expect = logistic(p.alpha * (th + p.delta_theta)) * logistic(-5.0);
    EXPECT_NEAR(trap(th, p.delta_theta, p.alpha), expect, 1e-15);
    EXPECT_NEAR(logistic(-5.0), 6.692850924e-3, 1e-12);
}

TEST(PdTorque, TailBoundHoldsBeyondLog1000OverAlpha) {
    StandingControlParams p;
    const double start = p.delta_theta + std::log(1000.0) / p.alpha + 1e-9;
    for (int i = 0; i <= 200; ++i) {
        const double th = start + (std::numbers::pi - start) * i / 200.0;
        for (double w : {-20.0, 0.0, 5.0}) {
            EXPECT_LT(std::abs(pd_torque(th, w, p)), 1e-3 * (p.K_p * th + p.K_d * std::abs(w)));
            EXPECT_LT(std::abs(pd_torque(-th, w, p)), 1e-3 * (p.K_p * th + p.K_d * std::abs(w)));
        }
    }
}

TEST(EquilibriumIndex, EncodingAndTranspose) {
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const auto nu = EquilibriumIndex::from_status(static_cast<AgentStatus>(a), static_cast<AgentStatus>(b));
            EXPECT_EQ(nu.value(), 3 * a + b + 1);
            EXPECT_EQ(nu.transposed().value(), 3 * b + a + 1);
            EXPECT_EQ(nu.transposed().transposed(), nu);
            EXPECT_EQ(nu.mirrored().mirrored(), nu);
        }
    }
    EXPECT_EQ(EquilibriumIndex(2).transposed().value(), 4);
    EXPECT_EQ(EquilibriumIndex(3).transposed().value(), 7);
    EXPECT_EQ(EquilibriumIndex(2).mirrored().value(), 7);
    EXPECT_EQ(EquilibriumIndex(3).mirrored().value(), 4);
    EXPECT_FALSE(EquilibriumIndex(0).mirrored().classified());
    EXPECT_THROW(EquilibriumIndex(10), Error);
    EXPECT_THROW(EquilibriumIndex(-1), Error);
}

TEST(EquilibriumIndex, NearestOfThree) {
    EXPECT_EQ(angle_status(-1.62), AgentStatus::FallenNegative);
    EXPECT_EQ(angle_status(1.7), AgentStatus::FallenPositive);
    EXPECT_EQ(angle_status(0.3), AgentStatus::Standing);
    EXPECT_EQ(angle_status(-0.7), AgentStatus::Standing);
}

TEST(WinLoss, Outcomes) {
    EXPECT_EQ(WinLossMatrix::outcome(EquilibriumIndex(1)), Outcome::BothStanding);
    EXPECT_EQ(WinLossMatrix::outcome(EquilibriumIndex(2)), Outcome::FirstWins);
    EXPECT_EQ(WinLossMatrix::outcome(EquilibriumIndex(3)), Outcome::FirstWins);
    EXPECT_EQ(WinLossMatrix::outcome(EquilibriumIndex(4)), Outcome::SecondWins);
    EXPECT_EQ(WinLossMatrix::outcome(EquilibriumIndex(7)), Outcome::SecondWins);
    for (int nu : {5, 6, 8, 9}) EXPECT_EQ(WinLossMatrix::outcome(EquilibriumIndex(nu)), Outcome::DoubleFall);
    EXPECT_EQ(WinLossMatrix::outcome(EquilibriumIndex(0)), Outcome::Unresolved);
}

TEST(Detector, TrivialStateAfterDwell) {
    ConvergenceSettings c;
    const double dt = 5e-4;
    EquilibriumDetector d(c, dt);
    const StateVector s = StateVector::trivial(1.0);
    int steps = 0;
    std::optional<EquilibriumIndex> nu;
    while (!(nu = d.update(s))) ++steps;
    EXPECT_EQ(nu->value(), 1);
    EXPECT_EQ(steps, 1000);
}

TEST(Detector, FallenAgentOne) {
    StateVector s = StateVector::trivial(1.0);
    s.theta(Agent::First) = -1.62;
    EquilibriumDetector d(ConvergenceSettings{}, 5e-4);
    std::optional<EquilibriumIndex> nu;
    for (int k = 0; k < 2000 && !nu; ++k) nu = d.update(s);
    ASSERT_TRUE(nu);
    EXPECT_EQ(nu->value(), 4);
}

TEST(Detector, RateGateBlocks) {
    StateVector s = StateVector::trivial(1.0);
    s.thetadot(Agent::First) = 0.5;
    EquilibriumDetector d(ConvergenceSettings{}, 5e-4);
    for (int k = 0; k < 5000; ++k) EXPECT_FALSE(d.update(s));
    EXPECT_FALSE(classify_at_rest(s, ConvergenceSettings{}));
}

TEST(Simulate, TrivialStateStandsStill) {
    ModelParams mp;
    SimSettings sim;
    const SimResult r = simulate(StateVector::trivial(mp.rod.w0), no_control, mp, sim);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.nu.value(), 1);
    EXPECT_FALSE(r.fired_first || r.fired_second);
}

TEST(Simulate, MaximalImpulseIsDeterministic) {
    ModelParams mp;
    SimSettings sim;
    auto run = [&] {
        std::vector<StateVector> traj;
        const SimResult r = simulate(StateVector::trivial(mp.rod.w0), single_impulse(ImpulseParams{}), mp, sim,
                                     [&](const TrajectorySample& s) { traj.push_back(s.state); });
        return std::make_pair(r, traj);
    };
    const auto [a, ta] = run();
    const auto [b, tb] = run();
    EXPECT_GE(a.nu.value(), 1);
    EXPECT_LE(a.nu.value(), 9);
    EXPECT_EQ(a.nu, b.nu);
    EXPECT_EQ(a.final_state.v, b.final_state.v);
    ASSERT_EQ(ta.size(), tb.size());
    for (std::size_t i = 0; i < ta.size(); ++i) ASSERT_EQ(ta[i].v, tb[i].v);
}

TEST(Simulate, BeyondDeadbandAgentOneFalls) {
    ModelParams mp;
    SimSettings sim;
    const MeasurementMap map{MeasurementMode::FourDim, mp.rod.w0, mp.pendulum.r};
    Measurement y;
    y.size = 4;
    y.data = {0.6, 0.0, 0.0, 0.0, 0.0, 0.0};
    const SimResult r = simulate(map.reconstruct(y), no_control, mp, sim);
    ASSERT_TRUE(r.converged);
    EXPECT_TRUE(r.nu.value() == 4 || r.nu.value() == 7) << r.nu.value();
}

TEST(Simulate, PulseIntegratesExactlyToQ) {
    const double dt = 5e-4;
    for (double width : {dt, 4 * dt}) {
        double area = 0.0;
        for (int k = 0; k < 100; ++k) area += unit_pulse(k * dt, 0.0, width) * dt;
        EXPECT_NEAR(area, 1.0, 1e-12);
    }
}

TEST(Simulate, RejectsNonFiniteInitialState) {
    ModelParams mp;
    StateVector s = StateVector::trivial(1.0);
    s[1] = INFINITY;
    EXPECT_THROW(simulate(s, no_control, mp, SimSettings{}), Error);
}

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

#include <cipw/controller.hpp>
#include <cipw/dynamics.hpp>
#include <cipw/grid.hpp>
#include <cipw/measurement.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cipw;

namespace {

Measurement y4(double a, double b, double c, double d) {
    Measurement y;
    y.size = 4;
    y.data = {a, b, c, d, 0.0, 0.0};
    return y;
}

ClassifierTable constant_table(GridSpec g, std::uint8_t label) {
    ClassifierTable t;
    t.grid = g;
    t.mode = MeasurementMode::FourDim;
    t.labels.assign(g.cell_count(), label);
    return t;
}

} // namespace

TEST(Measure, Projection) {
    MeasurementMap m;
    EXPECT_EQ(m.measure(StateVector::trivial(1.0)), y4(0, 0, 0, 0));
    StateVector s;
    s.v = {0.5, 0.1, 0.2, -1, 1.4, 0.3, 0.1, 3};
    EXPECT_EQ(m.measure(s), y4(0.2, -1, 0.1, 3));
    MeasurementMap six{MeasurementMode::SixDim, 1.0, 0.3};
    const Measurement y = six.measure(s);
    EXPECT_EQ(y.size, 6u);
    EXPECT_EQ(y[0], 0.5);
    EXPECT_EQ(y[1], 0.1);
    EXPECT_EQ(y[5], 3);
}

TEST(Reconstruct, TrivialAndEqualAngles) {
    MeasurementMap m;
    EXPECT_EQ(m.reconstruct(y4(0, 0, 0, 0)).v, StateVector::trivial(1.0).v);
    const StateVector s = m.reconstruct(y4(0.4, 1.3, 0.4, 1.3));
    EXPECT_DOUBLE_EQ(s.x(Agent::Second), 1.0);
    EXPECT_DOUBLE_EQ(s.xdot(Agent::Second), s.xdot(Agent::First));
}

TEST(Reconstruct, ClosedFormAndTipDistance) {
    MeasurementMap m;
    const StateVector s = m.reconstruct(y4(0.3, 0, -0.2, 0));
    const double dc = std::cos(-0.2) - std::cos(0.3);
    const double x2 = 0 - 0.3 * (std::sin(-0.2) - std::sin(0.3)) + std::sqrt(1 - 0.09 * dc * dc);
    EXPECT_NEAR(s.x(Agent::Second), x2, 1e-15);
    ModelParams mp;
    EXPECT_NEAR(rod_force(s, mp.rod, mp.pendulum).length, 1.0, 1e-14);
}

TEST(Reconstruct, RigidRateMakesRodRateVanish) {
    MeasurementMap m;
    ModelParams mp;
    std::mt19937_64 rng(7);
    const GridSpec box = GridSpec::default_box(1);
    for (int k = 0; k < 200; ++k) {
        Measurement y;
        y.size = 4;
        for (std::size_t j = 0; j < 4; ++j)
            y[j] = box.lower[j] + (box.upper[j] - box.lower[j]) * std::uniform_real_distribution<>(0, 1)(rng);
        const StateVector s = m.reconstruct(y);
        const RodState rod = rod_force(s, mp.rod, mp.pendulum);
        EXPECT_NEAR(rod.length, 1.0, 1e-12);
        EXPECT_NEAR(rod.rate, 0.0, 1e-12);
        EXPECT_EQ(m.measure(s), y);
    }
}

TEST(Reconstruct, InfeasibleConstraint) {
    MeasurementMap m{MeasurementMode::FourDim, 0.1, 0.3};
    try {
        m.reconstruct(y4(0.0, 0, 1.5, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ConstraintInfeasible);
    }
}

TEST(Mirror, NegateAndSwap) {
    StateVector x;
    x.v = {0, 0, 0.1, 0, 1, 0, -0.2, 0};
    const StateVector m = mirror_transform(x);
    const std::array<double, 8> want{-1, -0.0, 0.2, -0.0, -0.0, -0.0, -0.1, -0.0};
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(m[i], want[i]);
    x.v = {0.3, -1, 0.2, 4, 1.2, 0.5, -0.6, 2};
    EXPECT_EQ(mirror_transform(mirror_transform(x)).v, x.v);
}

TEST(Grid, Centers) {
    const GridSpec g = GridSpec::default_box(50);
    EXPECT_NEAR(cell_center({1, 1, 1, 1}, g)[0], -0.1244, 1e-15);
    const GridSpec one = GridSpec::default_box(1);
    EXPECT_NEAR(cell_center({1, 1, 1, 1}, one)[1], (-3.28 + 10.58) / 2, 1e-15);
    const GridSpec g5 = GridSpec::default_box(5);
    for (std::size_t j = 0; j < 4; ++j) {
        CellIndex a{2, 2, 2, 2}, b = a;
        b[j] = 3;
        EXPECT_NEAR(cell_center(b, g5)[j] - cell_center(a, g5)[j], g5.width(j), 1e-14);
    }
}

TEST(Grid, CellOfRoundTripAndBoundaries) {
    const GridSpec g = GridSpec::uniform({-0.13, -3.28, -0.35, -3.80}, {0.43, 10.58, 0.31, 5.15}, 4);
    for (std::size_t k = 0; k < g.cell_count(); ++k) {
        const CellIndex i = cell_from_linear(k, g);
        EXPECT_EQ(linear_index(i, g), k);
        const auto back = cell_of(cell_center(i, g).values(), g);
        ASSERT_TRUE(back);
        EXPECT_EQ(*back, i);
    }
    auto lo = cell_of(y4(-0.13, -3.28, -0.35, -3.80).values(), g);
    ASSERT_TRUE(lo);
    EXPECT_EQ(*lo, (CellIndex{1, 1, 1, 1}));
    auto hi = cell_of(y4(0.43, 10.58, 0.31, 5.15).values(), g);
    ASSERT_TRUE(hi);
    EXPECT_EQ(*hi, (CellIndex{4, 4, 4, 4}));
    EXPECT_FALSE(cell_of(y4(0.50, 0, 0, 0).values(), g));
    // Interior faces belong to the higher cell.
    const GridSpec u = GridSpec::uniform({0, 0, 0, 0}, {1, 1, 1, 1}, 4);
    EXPECT_EQ((*cell_of(y4(0.5, 0.25, 0.75, 0.1).values(), u)), (CellIndex{3, 2, 4, 1}));
}

TEST(Grid, RowMajorLastFastest) {
    const GridSpec g = GridSpec::uniform({0, 0, 0, 0}, {1, 1, 1, 1}, 3);
    EXPECT_EQ(linear_index({1, 1, 1, 2}, g), 1u);
    EXPECT_EQ(linear_index({1, 1, 2, 1}, g), 3u);
    EXPECT_EQ(linear_index({2, 1, 1, 1}, g), 27u);
    EXPECT_EQ(linear_index({3, 3, 3, 3}, g), 80u);
}

TEST(Selector, Membership) {
    const SelectorSet J{2, 3};
    EXPECT_TRUE(selector(EquilibriumIndex(2), J));
    EXPECT_FALSE(selector(EquilibriumIndex(5), J));
    for (int a : {1, 2, 3, 9}) EXPECT_FALSE(selector(EquilibriumIndex(0), SelectorSet{a}));
    EXPECT_THROW(SelectorSet{0}, Error);
    EXPECT_EQ(mirror_set(J), (SelectorSet{4, 7}));
    EXPECT_EQ(mirror_set(mirror_set(SelectorSet{1, 5, 6, 8})), (SelectorSet{1, 5, 6, 8}));
}

TEST(Generator, IdleStaysSilent) {
    ImpulseGeneratorState g;
    ImpulseParams p;
    for (int k = 0; k < 1000; ++k) EXPECT_EQ(impulse_generator_step(g, false, k * 5e-4, p), 0.0);
}

TEST(Generator, SinglePulseAtRise) {
    ImpulseGeneratorState g;
    ImpulseParams p;
    const double dt = 5e-4;
    std::vector<double> out;
    for (int k = 0; k < 4000; ++k) out.push_back(impulse_generator_step(g, k >= 2000, k * dt, p));
    for (int k = 0; k < 4000; ++k) EXPECT_EQ(out[k], k == 2000 ? 2000.0 : 0.0) << k;
}

TEST(Generator, HeldSelectorRespectsRelaxation) {
    const double dt = 5e-4;
    for (double k : {1.0, 4.0}) {
        ImpulseParams p;
        p.tau_G = k * dt;
        ImpulseGeneratorState g;
        std::vector<double> rises;
        for (int s = 0; s < 200; ++s) {
            const auto before = g.last_rise_time;
            impulse_generator_step(g, (s / 3) % 2 == 0, s * dt, p);
            if (g.last_rise_time != before) rises.push_back(*g.last_rise_time);
        }
        ASSERT_GT(rises.size(), 2u);
        for (std::size_t i = 1; i < rises.size(); ++i) EXPECT_GE(rises[i] - rises[i - 1], p.tau_G - 1e-12);
    }
}

TEST(IcOutput, FiresOnlyInSelectedCells) {
    const GridSpec g = GridSpec::default_box(2);
    MeasurementMap map;
    ImpulseParams p;
    const StateVector s = StateVector::trivial(1.0);
    {
        const ClassifierTable t = constant_table(g, 5);
        ImpulseGeneratorState gen;
        EXPECT_EQ(ic_output(s, t, map, {2, 3}, gen, p, 0.0), 0.0);
    }
    {
        const ClassifierTable t = constant_table(g, 2);
        ImpulseGeneratorState gen;
        EXPECT_NEAR(ic_output(s, t, map, {2, 3}, gen, p, 0.0), 120.0, 1e-12);
        EXPECT_EQ(ic_output(s, t, map, {2, 3}, gen, p, 5e-4), 0.0);
        StateVector far = s;
        far.theta(Agent::First) = 0.5;
        ImpulseGeneratorState fresh;
        bool outside = false;
        EXPECT_EQ(ic_output(far, t, map, {2, 3}, fresh, p, 0.0, &outside), 0.0);
        EXPECT_TRUE(outside);
    }
}

TEST(DelayBuffer, StepsBackAndWarmup) {
    DelayBuffer b(0.0045, 5e-4);
    EXPECT_EQ(b.delay_steps(), 9u);
    for (int k = 0; k < 30; ++k) {
        StateVector s;
        s[0] = k;
        b.push(s);
        EXPECT_EQ(b.delayed()[0], std::max(0, k - 9));
    }
    DelayBuffer zero(0.0, 5e-4);
    StateVector s;
    s[0] = 4;
    zero.push(s);
    EXPECT_EQ(zero.delayed()[0], 4);
}

TEST(IntelligentController, ZeroDelayMatchesIcOutput) {
    const GridSpec g = GridSpec::uniform({-0.13, -3.28, -0.35, -3.80}, {0.43, 10.58, 0.31, 5.15}, 3);
    auto t = std::make_shared<ClassifierTable>(constant_table(g, 0));
    for (std::size_t k = 0; k < t->labels.size(); ++k) t->labels[k] = static_cast<std::uint8_t>(k % 10);
    MeasurementMap map;
    ImpulseParams p;
    IntelligentController ic(Agent::First, IcSpec{t, {2, 3}, p, 0.0}, map, 5e-4);
    ImpulseGeneratorState gen;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<> u(-0.3, 0.3), v(-3, 5);
    for (int k = 0; k < 500; ++k) {
        StateVector s = StateVector::trivial(1.0);
        s.theta(Agent::First) = u(rng);
        s.thetadot(Agent::First) = v(rng);
        s.theta(Agent::Second) = u(rng);
        s.thetadot(Agent::Second) = v(rng);
        EXPECT_EQ(ic.step(s, k * 5e-4), ic_output(s, *t, map, {2, 3}, gen, p, k * 5e-4));
    }
}

TEST(IntelligentController, SecondAgentUsesMirroredState) {
    const GridSpec g = GridSpec::uniform({-0.13, -3.28, -0.35, -3.80}, {0.43, 10.58, 0.31, 5.15}, 3);
    auto t = std::make_shared<ClassifierTable>(constant_table(g, 0));
    for (std::size_t k = 0; k < t->labels.size(); ++k) t->labels[k] = static_cast<std::uint8_t>(1 + k % 9);
    MeasurementMap map;
    ImpulseParams p;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<> u(-0.3, 0.3), v(-3, 3);
    for (int k = 0; k < 300; ++k) {
        StateVector x = StateVector::trivial(1.0);
        x.theta(Agent::First) = u(rng);
        x.thetadot(Agent::First) = v(rng);
        x.theta(Agent::Second) = u(rng);
        x.thetadot(Agent::Second) = v(rng);
        IntelligentController second(Agent::Second, IcSpec{t, {4, 7}, p, 0.0}, map, 5e-4);
        IntelligentController first(Agent::First, IcSpec{t, {2, 3}, p, 0.0}, map, 5e-4);
        EXPECT_EQ(second.step(x, 0.0), -first.step(mirror_transform(x), 0.0));
    }
}

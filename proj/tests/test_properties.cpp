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

#include <cipw/validation.hpp>

#include <gtest/gtest.h>

using namespace cipw;

namespace {

ValidationSetup setup() {
    ValidationSetup v;
    v.jobs = 2;
    return v;
}

std::shared_ptr<const ClassifierTable> learned_m2() {
    static const auto t = std::make_shared<const ClassifierTable>(
        learn_table(GridSpec::default_box(2), MeasurementMode::FourDim, ModelParams{}, ImpulseParams{}, SimSettings{}));
    return t;
}

/// Table with every label present, so both controllers fire often.
std::shared_ptr<const ClassifierTable> busy_table() {
    ClassifierTable t = *learned_m2();
    t.grid = GridSpec::default_box(3);
    t.labels.resize(t.grid.cell_count());
    for (std::size_t k = 0; k < t.labels.size(); ++k) t.labels[k] = static_cast<std::uint8_t>((k + 1) % 10);
    return std::make_shared<const ClassifierTable>(std::move(t));
}

void expect(const CheckResult& r) { EXPECT_TRUE(r.passed) << r.name << ": " << r.detail; }

} // namespace

TEST(Property, MirrorSymmetryWithFiringControllers) {
    const CheckResult r = validation::mirror_symmetry(setup(), busy_table());
    expect(r);
    EXPECT_NE(r.detail.find("fired"), std::string::npos);
}

TEST(Property, MirrorSymmetryWithLearnedTable) { expect(validation::mirror_symmetry(setup(), learned_m2())); }

TEST(Property, EnergyDissipation) { expect(validation::energy_dissipation(setup())); }

TEST(Property, RodNearRigidity) { expect(validation::rod_near_rigidity(setup())); }

TEST(Property, Determinism) { expect(validation::determinism(setup(), busy_table())); }

TEST(Property, SingleValuedLabels) { expect(validation::label_disjointness(setup(), *learned_m2())); }

TEST(Property, GeneratorRefractory) { expect(validation::generator_refractory(setup())); }

TEST(Property, ImpulseArea) { expect(validation::impulse_area(setup())); }

TEST(Property, ControllerMirrorEquivariance) {
    expect(validation::controller_mirror_equivariance(setup(), learned_m2()));
}

TEST(Property, ReconstructionConsistency) { expect(validation::reconstruction_consistency(setup())); }

TEST(Property, EvaluationOrderIndependence) { expect(validation::evaluation_order(setup(), *learned_m2())); }

TEST(Property, LabelPartition) { expect(validation::label_partition(*learned_m2())); }

TEST(Property, PersistenceIdentity) { expect(validation::persistence_identity(*learned_m2(), ModelParams{})); }

TEST(Property, SweepRateIdentityNoFireAndDeterminism) {
    const ValidationSetup v = setup();
    for (const auto& table : {learned_m2(), busy_table()}) {
        const SweepConfig c = validation::small_competition(v, table);
        const SweepResult a = competition_run(c);
        const SweepResult b = competition_run(c);
        expect(validation::rate_identity(a));
        expect(validation::no_fire_consistency(c, a));
        EXPECT_EQ(a.trials, b.trials);
    }
}

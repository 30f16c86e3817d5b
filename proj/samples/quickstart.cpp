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

// Learns a coarse classifier table, then lets two controlled agents compete
// over a handful of disturbances and prints the outcome of each trial.

#include <cipw/cipw.hpp>

#include <iostream>
#include <memory>

int main() {
    using namespace cipw;
    const ModelParams model;
    const SimSettings sim;
    const ImpulseParams impulse;

    LearnOptions opts;
    opts.progress = [](std::size_t done, std::size_t total) {
        if (done == total) std::cout << "learned " << total << " cells\n";
    };
    auto table = std::make_shared<const ClassifierTable>(
        learn_table(GridSpec::default_box(2), MeasurementMode::FourDim, model, impulse, sim, opts));

    SweepConfig c;
    c.N_Q = 4;
    c.agent1 = IcSpec{table, {2, 3}, impulse, 0.0};
    c.agent2 = IcSpec{table, {4, 7}, impulse, 0.0045};
    const SweepResult r = competition_run(c);

    for (const auto& t : r.trials) {
        std::cout << "Q = " << t.Q << " on agent " << (t.side == Agent::First ? 1 : 2) << ": "
                  << WinLossMatrix::label(EquilibriumIndex(t.nu)) << (t.fired() ? "" : " (no pulse)") << '\n';
    }
    for (const auto& s : r.rates) {
        std::cout << "E" << s.agent << " = ";
        if (s.rate) std::cout << *s.rate << '\n';
        else std::cout << "undefined\n";
    }
}

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

// Long-running reproduction of the published rates at m = 50 and m = 100.
// Tables are cached in the work directory; a full run takes days on one core.

#include <cipw/cipw.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace cipw;

namespace {

int failures = 0;

void report(const std::string& name, std::optional<double> got, double want, double tol) {
    const bool ok = got && std::abs(*got - want) <= tol;
    failures += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << ": " << (got ? std::to_string(*got) : "undefined")
              << " vs " << want << " (+- " << tol << ")" << std::endl;
}

std::shared_ptr<const ClassifierTable> cached_table(const fs::path& work, int m, unsigned jobs) {
    const ModelParams mp;
    const fs::path path = work / ("table_m" + std::to_string(m) + ".bin");
    if (fs::exists(path)) return std::make_shared<const ClassifierTable>(load_table(path, mp));
    LearnOptions o;
    o.jobs = jobs;
    o.progress = [m](std::size_t done, std::size_t total) {
        if (done % 100000 == 0 || done == total) std::cerr << "m=" << m << ": " << done << "/" << total << std::endl;
    };
    const ImpulseParams impulse;
    const ClassifierTable t =
        learn_table(GridSpec::default_box(m), MeasurementMode::FourDim, mp, impulse, SimSettings{}, o);
    save_table(t, path);
    return std::make_shared<const ClassifierTable>(t);
}

std::vector<double> default_delays() {
    std::vector<double> d;
    for (int k = 0; k <= 12; ++k) d.push_back(0.0005 * k);
    return d;
}

std::optional<double> best_rate(const DelayScanResult& r) {
    if (!r.best) return std::nullopt;
    return r.points[*r.best].E;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"full-resolution reproduction"};
    std::string work = "full_scale";
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    double tol = 0.05;
    app.add_option("--work", work, "directory for cached tables");
    app.add_option("--jobs", jobs, "worker threads");
    app.add_option("--tolerance", tol, "absolute tolerance on each rate");
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(work);

    const ImpulseParams impulse;
    const auto t50 = cached_table(work, 50, jobs);
    const auto t100 = cached_table(work, 100, jobs);

    SweepConfig c;
    c.N_Q = 100;
    c.jobs = jobs;
    c.agent1 = IcSpec{t50, {2, 3}, impulse, 0.0};
    report("E of IC(50) on agent 1", impulse_response_sweep(c).rate_of(1).rate, 0.165, tol);

    c.side = DisturbanceSide::Both;
    report("max E of DIC(50) over tau_d", best_rate(delay_scan(c, default_delays())), 0.392, tol);
    c.agent1 = IcSpec{t100, {2, 3}, impulse, 0.0};
    report("max E of DIC(100) over tau_d", best_rate(delay_scan(c, default_delays())), 0.683, tol);

    c.agent2 = IcSpec{t50, {4, 7}, impulse, 0.0045};
    const SweepResult duel = competition_run(c);
    report("IC(100) vs DIC(50): E1", duel.rate_of(1).rate, 66.0 / 167.0, tol);
    report("IC(100) vs DIC(50): E2", duel.rate_of(2).rate, 96.0 / 167.0, tol);
    return failures == 0 ? 0 : 1;
}

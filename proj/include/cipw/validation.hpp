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

#ifndef CIPW_VALIDATION_HPP
#define CIPW_VALIDATION_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <sstream>
#include <string>
#include <vector>

#include "cipw/controller.hpp"
#include "cipw/dynamics.hpp"
#include "cipw/experiments.hpp"
#include "cipw/learning.hpp"
#include "cipw/table_io.hpp"

namespace cipw {

struct CheckResult {
    std::string module;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Inputs of the invariant suite. Tables that are not supplied are learned.
struct ValidationSetup {
    ModelParams model;
    SimSettings sim;
    ImpulseParams impulse;
    GridSpec box = GridSpec::default_box(1);
    int coarse = 5;
    int fine = 10;
    int probes = 200;
    unsigned jobs = 1;
    std::uint64_t seed = 0x5eed2026u;
    std::shared_ptr<const ClassifierTable> coarse_table;
    std::shared_ptr<const ClassifierTable> fine_table;
    std::function<void(const std::string&)> log;
};

namespace validation {

/// Uniform doubles from a fixed 64-bit engine; identical on every platform.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double uniform(double a, double b) { return a + (b - a) * (static_cast<double>(rng_() >> 11) * 0x1.0p-53); }
    bool coin(double p) { return uniform(0.0, 1.0) < p; }
    Measurement point(const GridSpec& g) {
        Measurement y;
        y.size = g.dim();
        for (std::size_t j = 0; j < g.dim(); ++j) y[j] = uniform(g.lower[j], g.upper[j]);
        return y;
    }

private:
    std::mt19937_64 rng_;
};

inline std::string fmt(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

inline GridSpec with_resolution(const GridSpec& box, int m) {
    return GridSpec::uniform(box.lower, box.upper, m);
}

/// Box seen from agent 2: (th1, w1, th2, w2) -> (-th2, -w2, -th1, -w1).
inline GridSpec mirrored_box(const GridSpec& g) {
    GridSpec out = g;
    const std::size_t perm[4] = {2, 3, 0, 1};
    for (std::size_t j = 0; j < 4; ++j) {
        out.lower[j] = -g.upper[perm[j]];
        out.upper[j] = -g.lower[perm[j]];
        out.resolution[j] = g.resolution[perm[j]];
    }
    return out;
}

inline std::string table_bytes(const ClassifierTable& t) {
    std::ostringstream o(std::ios::binary);
    save_table(t, o);
    return o.str();
}

// dynamics -----------------------------------------------------------------

inline CheckResult mirror_symmetry(const ValidationSetup& v, const std::shared_ptr<const ClassifierTable>& table) {
    const ModelParams& mp = v.model;
    const double dt = v.sim.dt;
    const MeasurementMap map{MeasurementMode::FourDim, mp.rod.w0, mp.pendulum.r};
    Measurement y0;
    y0.size = 4;
    y0.data = {0.08, 0.4, -0.05, 0.25, 0.0, 0.0};
    StateVector a = map.reconstruct(y0);
    StateVector b = mirror_transform(a);
    IntelligentController ic_a(Agent::First, IcSpec{table, {2, 3}, v.impulse, 2e-3}, map, dt);
    IntelligentController ic_b(Agent::Second, IcSpec{table, {4, 7}, v.impulse, 2e-3}, map, dt);
    const double Q = 0.04;
    double dev = 0.0;
    const long n = std::lround(5.0 / dt);
    for (long k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double d = Q * unit_pulse(t, 0.0, dt);
        const Torques ta{ic_a.step(a, t) + d, 0.0};
        const Torques tb{0.0, ic_b.step(b, t) - d};
        a = rkg4_step(a, [&](const StateVector& s) { return closed_loop_rhs(s, ta, mp); }, dt);
        b = rkg4_step(b, [&](const StateVector& s) { return closed_loop_rhs(s, tb, mp); }, dt);
        const StateVector m = mirror_transform(a);
        for (std::size_t i = 0; i < 8; ++i) dev = std::max(dev, std::abs(m[i] - b[i]));
    }
    return {"dynamics", "mirror symmetry over 5 s", dev < 1e-6,
            "max deviation " + fmt(dev) + (ic_a.fired() ? ", controller fired" : ", controller silent")};
}

inline CheckResult energy_dissipation(const ValidationSetup& v) {
    ModelParams mp = v.model;
    mp.floor.mu = 0.0;
    const MeasurementMap map{MeasurementMode::FourDim, mp.rod.w0, mp.pendulum.r};
    Measurement y0;
    y0.size = 4;
    y0.data = {0.05, 0.3, -0.04, -0.2, 0.0, 0.0};
    StateVector s = map.reconstruct(y0);
    s.xdot(Agent::Second) += 0.05;
    const double dt = v.sim.dt;
    double e = mechanical_energy(s, mp);
    double worst = -1.0;
    int steps = 0;
    auto above_floor = [&](const StateVector& x) {
        return tip_kinematics(x, Agent::First, mp.pendulum).pos.y > 1e-3
               && tip_kinematics(x, Agent::Second, mp.pendulum).pos.y > 1e-3;
    };
    for (; steps < 4000; ++steps) {
        const StateVector next = rkg4_step(s, [&](const StateVector& x) { return eom_rhs(x, Torques{}, mp); }, dt);
        if (!above_floor(next)) break;
        const double e1 = mechanical_energy(next, mp);
        worst = std::max(worst, (e1 - e) / std::abs(e));
        e = e1;
        s = next;
    }
    return {"dynamics", "energy non-increasing without torque or contact", worst <= 1e-6 && steps >= 400,
            "largest relative step increase " + fmt(worst) + " over " + std::to_string(steps) + " contact-free steps"};
}

inline CheckResult rod_near_rigidity(const ValidationSetup& v) {
    const MeasurementMap map{MeasurementMode::FourDim, v.model.rod.w0, v.model.pendulum.r};
    double worst = 0.0;
    for (double Q : {0.005, 0.02, 0.04, 0.06}) {
        auto ctrl = [&, Q](const StepContext& c) {
            StepControl out;
            out.torque.first = Q * unit_pulse(c.t, 0.0, c.dt);
            return out;
        };
        simulate(StateVector::trivial(map.w0), ctrl, v.model, v.sim, [&](const TrajectorySample& s) {
            const double w = rod_force(s.state, v.model.rod, v.model.pendulum).length;
            worst = std::max(worst, std::abs(w - map.w0) / map.w0);
        });
    }
    return {"dynamics", "rod strain below 1% for Q up to Q_max", worst < 0.01, "max strain " + fmt(worst)};
}

inline CheckResult determinism(const ValidationSetup& v, const std::shared_ptr<const ClassifierTable>& table) {
    SweepConfig c;
    c.model = v.model;
    c.sim = v.sim;
    c.disturbance_width = v.sim.dt;
    c.agent1 = IcSpec{table, {2, 3}, v.impulse, 1e-3};
    std::vector<TrajectorySample> runs[2];
    TrialRecord rec[2];
    for (int k = 0; k < 2; ++k)
        rec[k] = run_trial(c, 0.03, Agent::First, 0, [&](const TrajectorySample& s) { runs[k].push_back(s); });
    bool same = rec[0] == rec[1] && runs[0].size() == runs[1].size();
    for (std::size_t i = 0; same && i < runs[0].size(); ++i)
        same = runs[0][i].t == runs[1][i].t && runs[0][i].state.v == runs[1][i].state.v;
    return {"dynamics", "repeated runs are bit-identical", same, std::to_string(runs[0].size()) + " samples compared"};
}

inline CheckResult label_disjointness(const ValidationSetup& v, const ClassifierTable& t) {
    const MeasurementMap map{t.mode, v.model.rod.w0, v.model.pendulum.r};
    const std::size_t n = t.grid.cell_count();
    const std::size_t stride = std::max<std::size_t>(1, n / 16);
    std::size_t checked = 0, mismatched = 0;
    for (std::size_t k = 0; k < n; k += stride, ++checked) {
        const auto [nu, _] = learn_cell(cell_from_linear(k, t.grid), t.grid, map, v.model, v.impulse, v.sim);
        mismatched += nu.value() != t.labels[k];
    }
    return {"dynamics", "one equilibrium per cell center", mismatched == 0,
            std::to_string(checked) + " cells re-simulated, " + std::to_string(mismatched) + " differ"};
}

// control ------------------------------------------------------------------

inline CheckResult deadband_cutoff(const ValidationSetup& v) {
    const auto& p = v.model.standing;
    const double start = p.delta_theta + 5.0 / p.alpha;
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double th = start + (std::numbers::pi - start) * i / 400.0;
        for (int k = -10; k <= 10; ++k) {
            const double w = 2.0 * k;
            for (double sign : {1.0, -1.0}) {
                const double bound = p.K_p * std::abs(th) + p.K_d * std::abs(w);
                worst = std::max(worst, std::abs(pd_torque(sign * th, sign * w, p)) / bound);
            }
        }
    }
    return {"control", "deadband tail below 1e-3 beyond delta_theta + 5/alpha", worst < 1e-3,
            "max |u|/(K_p|th|+K_d|w|) = " + fmt(worst)};
}

inline CheckResult generator_refractory(const ValidationSetup& v) {
    const double dt = v.sim.dt;
    Sampler rng(v.seed ^ 0x1);
    double closest = std::numeric_limits<double>::infinity();
    bool ok = true;
    std::size_t rises = 0;
    for (double k : {1.0, 3.0, 7.5}) {
        ImpulseParams p = v.impulse;
        p.delta_tau = dt;
        p.tau_G = k * dt;
        ImpulseGeneratorState g;
        std::optional<double> prev;
        for (int step = 0; step < 4000; ++step) {
            const double t = step * dt;
            impulse_generator_step(g, rng.coin(0.4), t, p);
            if (g.last_rise_time && (!prev || *g.last_rise_time != *prev)) {
                if (prev) {
                    const double gap = *g.last_rise_time - *prev;
                    closest = std::min(closest, gap / p.tau_G);
                    ok = ok && gap >= p.tau_G * (1.0 - 1e-9);
                }
                prev = g.last_rise_time;
                ++rises;
            }
        }
    }
    return {"control", "pulse rises separated by at least tau_G", ok && rises > 10,
            std::to_string(rises) + " rises, smallest gap/tau_G " + fmt(closest)};
}

inline CheckResult impulse_area(const ValidationSetup& v) {
    const double dt = v.sim.dt;
    double worst = 0.0;
    bool ok = true;
    for (double k : {1.0, 2.5, 4.0}) {
        ImpulseParams p = v.impulse;
        p.delta_tau = k * dt;
        p.tau_G = 10 * dt;
        ImpulseGeneratorState g;
        double area = 0.0;
        for (int step = 0; step < 40; ++step) area += p.P * impulse_generator_step(g, step == 3, step * dt, p) * dt;
        const double err = std::abs(area - p.P);
        worst = std::max(worst, err / std::abs(p.P));
        ok = ok && err <= std::abs(p.P) * dt / p.delta_tau * (1 + 1e-12);
    }
    return {"control", "one pulse integrates to P within one step", ok, "max relative error " + fmt(worst)};
}

inline CheckResult controller_mirror_equivariance(const ValidationSetup& v,
                                                   const std::shared_ptr<const ClassifierTable>& table) {
    const MeasurementMap map{MeasurementMode::FourDim, v.model.rod.w0, v.model.pendulum.r};
    const GridSpec mg = mirrored_box(table->grid);
    std::vector<std::uint8_t> direct(mg.cell_count());
    ImpulseParams neg = v.impulse;
    neg.P = -v.impulse.P;
    for (std::size_t k = 0; k < direct.size(); ++k) {
        const StateVector s0 = map.reconstruct(cell_center(cell_from_linear(k, mg), mg));
        auto ctrl = [&](const StepContext& c) {
            StepControl out;
            out.torque.second = neg.P * unit_pulse(c.t, 0.0, neg.delta_tau);
            return out;
        };
        direct[k] = static_cast<std::uint8_t>(simulate(s0, ctrl, v.model, v.sim).nu.value());
    }

    Sampler rng(v.seed ^ 0x2);
    const std::vector<SelectorSet> sets{{4, 7}, {1}, {2, 3}, {5, 6, 8, 9}};
    std::size_t probes = 0, mismatched = 0;
    for (int i = 0; i < 200; ++i) {
        StateVector x = map.reconstruct(rng.point(mg));
        const double shift = rng.uniform(-2.0, 2.0);
        x.x(Agent::First) += shift;
        x.x(Agent::Second) += shift;
        const auto cell = cell_of(map.measure(x).values(), mg);
        if (!cell) continue;
        const int nu_direct = direct[linear_index(*cell, mg)];
        for (const auto& J : sets) {
            IntelligentController ic(Agent::Second, IcSpec{table, J, v.impulse, 0.0}, map, v.sim.dt);
            const double u = ic.step(x, 0.0);
            const bool fire = nu_direct != 0 && J.contains(EquilibriumIndex(nu_direct));
            const double expect = fire ? -v.impulse.P / v.impulse.delta_tau : 0.0;
            mismatched += u != expect;
            ++probes;
        }
    }
    return {"control", "agent-2 controller matches a directly learned mirrored table", mismatched == 0 && probes > 0,
            std::to_string(probes) + " probe decisions, " + std::to_string(mismatched) + " differ"};
}

inline CheckResult reconstruction_consistency(const ValidationSetup& v) {
    const MeasurementMap map{MeasurementMode::FourDim, v.model.rod.w0, v.model.pendulum.r};
    Sampler rng(v.seed ^ 0x3);
    double worst = 0.0;
    for (int i = 0; i < 5000; ++i) {
        const StateVector s = map.reconstruct(rng.point(v.box));
        const double w = rod_force(s, v.model.rod, v.model.pendulum).length;
        worst = std::max(worst, std::abs(w - map.w0) / map.w0);
    }
    return {"control", "reconstructed tips are w0 apart", worst <= 1e-12, "max relative error " + fmt(worst)};
}

// learning -----------------------------------------------------------------

inline CheckResult evaluation_order(const ValidationSetup& v, const ClassifierTable& reference) {
    LearnOptions opts;
    opts.jobs = std::max(2u, v.jobs);
    const ClassifierTable parallel = learn_table(reference.grid, reference.mode, v.model, v.impulse, v.sim, opts);
    ClassifierTable reversed = reference;
    const MeasurementMap map{reference.mode, v.model.rod.w0, v.model.pendulum.r};
    for (std::size_t k = reference.labels.size(); k-- > 0;) {
        reversed.labels[k] = static_cast<std::uint8_t>(
            learn_cell(cell_from_linear(k, reference.grid), reference.grid, map, v.model, v.impulse, v.sim)
                .first.value());
    }
    const std::string base = table_bytes(reference);
    const bool ok = base == table_bytes(parallel) && base == table_bytes(reversed);
    return {"learning", "tables independent of order and concurrency", ok,
            std::to_string(reference.labels.size()) + " cells, jobs 1 vs " + std::to_string(opts.jobs) + " vs reversed"};
}

inline CheckResult label_partition(const ClassifierTable& t) {
    std::array<std::size_t, 10> hist{};
    bool ok = t.labels.size() == t.grid.cell_count();
    for (auto l : t.labels) {
        if (l > 9) ok = false;
        else ++hist[l];
    }
    std::size_t sum = 0;
    std::string d = "counts";
    for (std::size_t k = 0; k < 10; ++k) {
        sum += hist[k];
        d += " " + std::to_string(hist[k]);
    }
    return {"learning", "labels partition the grid", ok && sum == t.grid.cell_count(), d};
}

inline CheckResult persistence_identity(const ClassifierTable& t, const ModelParams& mp) {
    const std::string bytes = table_bytes(t);
    std::istringstream in(bytes, std::ios::binary);
    const ClassifierTable back = load_table(in, mp);
    const bool fields = back.grid == t.grid && back.mode == t.mode && back.labels == t.labels
                        && back.provenance == t.provenance;
    return {"learning", "save/load is the identity", fields && table_bytes(back) == bytes,
            std::to_string(bytes.size()) + " bytes"};
}

struct RefinementData {
    std::size_t probes = 0;
    std::size_t coarse_wrong = 0;
    std::size_t fine_wrong = 0;
};

inline RefinementData refinement(const ValidationSetup& v, const ClassifierTable& coarse, const ClassifierTable& fine) {
    const MeasurementMap map{MeasurementMode::FourDim, v.model.rod.w0, v.model.pendulum.r};
    Sampler rng(v.seed ^ 0x4);
    std::vector<Measurement> ys;
    for (int i = 0; i < v.probes; ++i) ys.push_back(rng.point(v.box));
    std::vector<int> truth(ys.size(), -1);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < ys.size();) {
            try {
                truth[i] = simulate(map.reconstruct(ys[i]), single_impulse(v.impulse), v.model, v.sim).nu.value();
            } catch (const Error&) {
                truth[i] = -1;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 1; j < std::max(1u, v.jobs); ++j) pool.emplace_back(work);
        work();
    }
    RefinementData d;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (truth[i] < 0) continue;
        const StateVector s = map.reconstruct(ys[i]);
        ++d.probes;
        d.coarse_wrong += quantized_classify(s, coarse, map).value() != truth[i];
        d.fine_wrong += quantized_classify(s, fine, map).value() != truth[i];
    }
    return d;
}

// experiments --------------------------------------------------------------

inline SweepConfig small_competition(const ValidationSetup& v, const std::shared_ptr<const ClassifierTable>& table) {
    SweepConfig c;
    c.model = v.model;
    c.sim = v.sim;
    c.N_Q = 8;
    c.Q_max = 0.06;
    c.disturbance_width = v.sim.dt;
    c.agent1 = IcSpec{table, {2, 3}, v.impulse, 0.0};
    c.agent2 = IcSpec{table, {4, 7}, v.impulse, 1e-3};
    c.jobs = v.jobs;
    return c;
}

inline CheckResult rate_identity(const SweepResult& r) {
    bool ok = true;
    std::string d;
    for (const auto& s : r.rates) {
        const std::size_t denom = r.n_total - r.n_no_fire;
        ok = ok && s.hits <= denom;
        if (s.rate) {
            ok = ok && *s.rate >= 0.0 && *s.rate <= 1.0 && std::abs(*s.rate * denom - s.hits) < 1e-9;
        } else {
            ok = ok && denom == 0;
        }
        d += "E" + std::to_string(s.agent) + " " + (s.rate ? fmt(*s.rate) : "undefined") + " ";
    }
    return {"experiments", "0 <= E <= 1 and E (N - N0) = N_J", ok,
            d + "N " + std::to_string(r.n_total) + " N0 " + std::to_string(r.n_no_fire)};
}

inline CheckResult no_fire_consistency(const SweepConfig& c, const SweepResult& r) {
    SweepConfig bare = c;
    bare.agent1.reset();
    bare.agent2.reset();
    std::size_t checked = 0, differ = 0;
    for (const auto& t : r.trials) {
        if (t.fired()) continue;
        std::vector<TrajectorySample> with, without;
        run_trial(c, t.Q, t.side, t.trial_id, [&](const TrajectorySample& s) { with.push_back(s); });
        run_trial(bare, t.Q, t.side, t.trial_id, [&](const TrajectorySample& s) { without.push_back(s); });
        bool same = with.size() == without.size();
        for (std::size_t i = 0; same && i < with.size(); ++i)
            same = with[i].state.v == without[i].state.v && with[i].total_torque.first == without[i].total_torque.first
                   && with[i].total_torque.second == without[i].total_torque.second;
        differ += !same;
        ++checked;
    }
    return {"experiments", "no-fire trials match controller-free runs", differ == 0,
            std::to_string(checked) + " no-fire trials, " + std::to_string(differ) + " differ"};
}

} // namespace validation

/// Runs every invariant check and returns one result per property.
inline std::vector<CheckResult> run_invariant_suite(ValidationSetup v) {
    using namespace validation;
    auto say = [&](const std::string& s) {
        if (v.log) v.log(s);
    };
    LearnOptions opts;
    opts.jobs = v.jobs;
    if (!v.coarse_table) {
        say("learning m=" + std::to_string(v.coarse) + " table");
        v.coarse_table = std::make_shared<const ClassifierTable>(learn_table(
            with_resolution(v.box, v.coarse), MeasurementMode::FourDim, v.model, v.impulse, v.sim, opts));
    }
    if (!v.fine_table) {
        say("learning m=" + std::to_string(v.fine) + " table");
        v.fine_table = std::make_shared<const ClassifierTable>(learn_table(
            with_resolution(v.box, v.fine), MeasurementMode::FourDim, v.model, v.impulse, v.sim, opts));
    }
    say("learning m=3 table");
    const auto small = std::make_shared<const ClassifierTable>(
        learn_table(with_resolution(v.box, 3), MeasurementMode::FourDim, v.model, v.impulse, v.sim, opts));

    std::vector<CheckResult> out;
    auto run = [&](const std::string& what, auto&& f) {
        say("checking " + what);
        out.push_back(f());
    };
    run("mirror symmetry", [&] { return mirror_symmetry(v, v.coarse_table); });
    run("energy", [&] { return energy_dissipation(v); });
    run("rod strain", [&] { return rod_near_rigidity(v); });
    run("determinism", [&] { return determinism(v, v.coarse_table); });
    run("single-valued labels", [&] { return label_disjointness(v, *small); });
    run("deadband", [&] { return deadband_cutoff(v); });
    run("refractory", [&] { return generator_refractory(v); });
    run("impulse area", [&] { return impulse_area(v); });
    run("controller mirror", [&] { return controller_mirror_equivariance(v, small); });
    run("reconstruction", [&] { return reconstruction_consistency(v); });
    run("evaluation order", [&] { return evaluation_order(v, *small); });
    run("label partition", [&] { return label_partition(*v.fine_table); });
    run("persistence", [&] { return persistence_identity(*v.fine_table, v.model); });

    say("checking refinement");
    const RefinementData ref = refinement(v, *v.coarse_table, *v.fine_table);
    const std::string ref_detail = std::to_string(ref.probes) + " probes, m=" + std::to_string(v.coarse) + " wrong "
                                   + std::to_string(ref.coarse_wrong) + ", m=" + std::to_string(v.fine) + " wrong "
                                   + std::to_string(ref.fine_wrong);
    const bool ref_ok = ref.probes > 0 && ref.coarse_wrong >= ref.fine_wrong;
    out.push_back({"learning", "finer grid misclassifies no more probes", ref_ok, ref_detail});

    say("checking sweeps");
    const SweepConfig comp = small_competition(v, v.coarse_table);
    const SweepResult r1 = competition_run(comp);
    const SweepResult r2 = competition_run(comp);
    out.push_back(rate_identity(r1));
    out.push_back(no_fire_consistency(comp, r1));
    out.push_back({"experiments", "repeated sweeps give identical records", r1.trials == r2.trials,
                   std::to_string(r1.trials.size()) + " trials"});
    out.push_back({"experiments", "finer tables agree with the oracle at least as often", ref_ok, ref_detail});
    return out;
}

inline void print_report(const std::vector<CheckResult>& results, std::ostream& out) {
    for (const auto& r : results)
        out << (r.passed ? "PASS" : "FAIL") << "  [" << r.module << "] " << r.name << " (" << r.detail << ")\n";
}

} // namespace cipw

#endif // CIPW_VALIDATION_HPP

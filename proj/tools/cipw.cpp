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

#include <cipw/cipw.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace cipw;

struct Options {
    std::string config;
    std::string out;
    std::optional<int> resolution;
    std::optional<double> delay;
    std::optional<unsigned> jobs;
    bool seed_check = false;
};

/// What one subcommand produced: the artifact bytes and a human summary.
struct Output {
    std::string data;
    std::string summary;
    bool ok = true;
};

bool wants_json(const std::string& path) {
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

std::string rates_line(const SweepResult& r) {
    std::ostringstream o;
    o << "trials " << r.n_total << ", no-fire " << r.n_no_fire;
    for (const auto& s : r.rates) {
        o << ", E" << s.agent << " = ";
        if (s.rate) o << *s.rate << " (" << s.hits << " hits)";
        else o << "undefined (no denominator)";
    }
    return o.str();
}

Output run_learn(const RunConfig& c) {
    LearnStats st;
    LearnOptions opts;
    opts.jobs = c.jobs;
    const ClassifierTable t = learn_table(c.learn_grid(), c.mode, c.model, c.impulse, c.sim, opts, &st);
    std::ostringstream bytes(std::ios::binary);
    save_table(t, bytes);
    std::array<std::size_t, 10> hist{};
    for (auto l : t.labels) ++hist[l];
    std::ostringstream s;
    s << "learned " << st.cells << " cells (infeasible " << st.infeasible << ", unconverged " << st.unconverged
      << ", failed " << st.failed << "); label counts";
    for (auto h : hist) s << ' ' << h;
    s << "; " << t.provenance.param_digest;
    return {bytes.str(), s.str()};
}

Output run_simulate(const RunConfig& c) {
    const SweepConfig sc = make_sweep_config(c);
    const StateVector s0 = c.simulate.initial_state.value_or(StateVector::trivial(c.model.rod.w0));
    std::vector<TrajectorySample> samples;
    const TrialRecord r = run_from(sc, s0, c.simulate.Q, c.simulate.side, 0,
                                   [&](const TrajectorySample& s) { samples.push_back(s); });
    std::ostringstream csv;
    export_trajectory_csv(samples, csv);
    std::ostringstream s;
    s << "nu = " << r.nu << " (" << WinLossMatrix::label(EquilibriumIndex(r.nu)) << "), "
      << (r.converged ? "converged" : "not converged") << " at t = " << r.t_final << " s, fired " << r.fired1 << '/'
      << r.fired2;
    return {csv.str(), s.str()};
}

Output sweep_output(const SweepResult& r, const std::string& out) {
    std::ostringstream o;
    if (wants_json(out)) export_json(r, o);
    else export_csv(r, o);
    return {o.str(), rates_line(r)};
}

Output run_delay_scan(const RunConfig& c, const std::string& out) {
    const DelayScanResult r = delay_scan(make_sweep_config(c), c.delays);
    std::ostringstream o;
    if (wants_json(out)) o << to_json(r).dump(2) << '\n';
    else export_csv(r, o);
    std::ostringstream s;
    s << r.points.size() << " delays; ";
    if (r.best) s << "best tau_d = " << r.points[*r.best].tau_d << " with E = " << *r.points[*r.best].E;
    else s << "E undefined at every delay";
    return {o.str(), s.str()};
}

Output run_slice(const RunConfig& c) {
    std::filesystem::path path = c.slice.table;
    if (path.empty() && c.agent1) path = c.agent1->table;
    if (path.empty()) throw Error(ErrorKind::Config, "slice needs slice.table or agent1.table");
    const ClassifierTable t = load_table(path, c.model);
    Measurement through;
    through.size = t.grid.dim();
    for (std::size_t j = 0; j < t.grid.dim(); ++j) {
        through[j] = c.slice.through ? c.slice.through->at(j) : 0.5 * (t.grid.lower[j] + t.grid.upper[j]);
    }
    if (c.slice.through && c.slice.through->size() != t.grid.dim())
        throw Error(ErrorKind::Config, "slice.through has wrong dimension");
    const ReachableSlice s = reachable_slice(t, c.slice.row_dim, c.slice.col_dim, through);
    std::ostringstream o;
    export_csv(s, t.grid, o);
    return {o.str(), std::to_string(s.rows) + " x " + std::to_string(s.cols) + " slice"};
}

Output run_validate(const RunConfig& c) {
    ValidationSetup v;
    v.model = c.model;
    v.sim = c.sim;
    v.impulse = c.impulse;
    if (c.validate.box) v.box = *c.validate.box;
    v.coarse = c.validate.coarse;
    v.fine = c.validate.fine;
    v.probes = c.validate.probes;
    v.jobs = c.jobs;
    v.log = [](const std::string& s) { std::cerr << "validate: " << s << '\n'; };
    const auto results = run_invariant_suite(v);
    std::ostringstream o;
    print_report(results, o);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.passed;
    return {o.str(), std::to_string(passed) + "/" + std::to_string(results.size()) + " invariants hold",
            passed == results.size()};
}

void write_bytes(const std::string& path, const std::string& data) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled inverted pendula: learn classifier tables, run sweeps, delay scans and competitions."};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Options o;
    app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", o.out, "output path (default: stdout, table required for learn)");
    app.add_option("--resolution", o.resolution, "grid resolution m per dimension")->check(CLI::PositiveNumber);
    app.add_option("--delay", o.delay, "classifier delay tau_d of agent 1 [s]")->check(CLI::NonNegativeNumber);
    app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--seed-check", o.seed_check, "run twice and fail unless both outputs are byte-identical");

    app.add_subcommand("learn", "learn and save a classifier table");
    app.add_subcommand("simulate", "single trajectory as CSV");
    app.add_subcommand("sweep", "impulse-response sweep with agent 1's controller");
    app.add_subcommand("delay-scan", "success rate as a function of the classifier delay");
    app.add_subcommand("compete", "both agents with controllers, disturbances on both sides");
    app.add_subcommand("slice", "2-D slice of a table as CSV");
    app.add_subcommand("validate", "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        RunConfig c = o.config.empty() ? parse_run_config(json::object()) : load_run_config(o.config);
        if (o.resolution) {
            if (c.grid) std::fill(c.grid->resolution.begin(), c.grid->resolution.end(), *o.resolution);
            c.resolution = *o.resolution;
        }
        if (o.delay) {
            if (cmd == "delay-scan") c.delays = {*o.delay};
            else if (c.agent1) c.agent1->tau_d = *o.delay;
            else throw Error(ErrorKind::Config, "--delay needs an agent1 controller in the config");
        }
        if (o.jobs) c.jobs = *o.jobs;
        std::string out = o.out;
        if (out.empty() && c.output) out = c.output->string();
        if (cmd == "learn" && out.empty()) {
            std::cerr << "usage error: learn needs --out or an output path in the config\n\n" << app.help();
            return 2;
        }

        std::error_code ec;
        if (!out.empty() && !o.config.empty() && std::filesystem::equivalent(out, o.config, ec))
            throw Error(ErrorKind::Config, "output path '" + out + "' is the config file itself");

        auto produce = [&]() -> Output {
            if (cmd == "learn") return run_learn(c);
            if (cmd == "simulate") return run_simulate(c);
            if (cmd == "sweep") return sweep_output(impulse_response_sweep(make_sweep_config(c)), out);
            if (cmd == "delay-scan") return run_delay_scan(c, out);
            if (cmd == "compete") return sweep_output(competition_run(make_sweep_config(c)), out);
            if (cmd == "slice") return run_slice(c);
            return run_validate(c);
        };

        const Output first = produce();
        if (o.seed_check) {
            const Output second = produce();
            if (first.data != second.data) {
                std::cerr << "seed-check: outputs of two identical runs differ\n";
                return 1;
            }
            std::cerr << "seed-check: two runs produced identical " << first.data.size() << "-byte outputs\n";
        }
        if (out.empty()) std::cout << first.data;
        else write_bytes(out, first.data);
        std::cerr << cmd << ": " << first.summary << '\n';
        return first.ok ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

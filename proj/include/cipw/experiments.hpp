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

#ifndef CIPW_EXPERIMENTS_HPP
#define CIPW_EXPERIMENTS_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cipw/controller.hpp"
#include "cipw/digest.hpp"
#include "cipw/serialization.hpp"
#include "cipw/simulate.hpp"

namespace cipw {

/// Which pendulum receives the initial disturbance v(t) = Q I(t).
enum class DisturbanceSide { First, Second, Both };

inline std::string_view to_string(DisturbanceSide s) {
    switch (s) {
        case DisturbanceSide::First: return "agent1";
        case DisturbanceSide::Second: return "agent2";
        case DisturbanceSide::Both: return "both";
    }
    return "agent1";
}

inline DisturbanceSide disturbance_side_from_string(std::string_view s) {
    if (s == "agent1") return DisturbanceSide::First;
    if (s == "agent2") return DisturbanceSide::Second;
    if (s == "both") return DisturbanceSide::Both;
    throw Error(ErrorKind::Config, "unknown disturbance side '" + std::string(s) + "'");
}

struct SweepConfig {
    double Q_max = 0.06;
    int N_Q = 100;
    DisturbanceSide side = DisturbanceSide::First;
    double disturbance_width = 5e-4;     ///< width of the disturbance pulse [s]
    std::optional<IcSpec> agent1;        ///< controller of the left agent
    std::optional<IcSpec> agent2;        ///< controller of the right agent (mirrored table reuse)
    ModelParams model;
    SimSettings sim;
    unsigned jobs = 1;

    void validate() const {
        require(N_Q >= 1, "N_Q must be at least 1");
        require(Q_max >= 0, "Q_max must be non-negative");
        require(disturbance_width > 0, "disturbance width must be positive");
        model.validate();
        sim.validate();
        for (const auto* c : {&agent1, &agent2}) {
            if (!*c) continue;
            require((*c)->table != nullptr, "controller needs a table");
            const std::string want = parameter_digest(model);
            if ((*c)->table->provenance.param_digest != want)
                throw Error(ErrorKind::DigestMismatch, "controller table digest " + (*c)->table->provenance.param_digest
                                                           + " does not match parameters " + want);
        }
    }

    /// N_Q values uniformly spaced over [0, Q_max], both endpoints included.
    std::vector<double> q_samples() const {
        std::vector<double> q(static_cast<std::size_t>(N_Q));
        if (N_Q == 1) {
            q[0] = Q_max;
            return q;
        }
        for (int k = 0; k < N_Q; ++k) q[static_cast<std::size_t>(k)] = Q_max * k / (N_Q - 1);
        return q;
    }
};

struct TrialRecord {
    std::size_t trial_id = 0;
    double Q = 0.0;
    Agent side = Agent::First;
    int nu = 0;
    bool fired1 = false;
    bool fired2 = false;
    bool converged = false;
    double t_final = 0.0;

    bool fired() const { return fired1 || fired2; }
    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Success rate of one controller: E = N_J / (N_total - N_0).
struct RateSummary {
    int agent = 1;
    SelectorSet J;
    std::size_t hits = 0;       ///< N_J: fired trials ending in J
    std::optional<double> rate; ///< empty when every trial is in N_0
};

struct SweepResult {
    std::vector<TrialRecord> trials;
    std::size_t n_total = 0;
    std::size_t n_no_fire = 0;
    std::vector<RateSummary> rates;
    json config_echo;

    const RateSummary& rate_of(int agent) const {
        for (const auto& r : rates)
            if (r.agent == agent) return r;
        throw Error(ErrorKind::InvalidArgument, "no rate for agent " + std::to_string(agent));
    }
};

/// Recomputes N_0, N_J and E from trial records. N_J counts only trials in
/// which some controller fired, so N_J <= N_total - N_0 always holds.
inline void aggregate(SweepResult& r, const std::vector<std::pair<int, SelectorSet>>& goals) {
    r.n_total = r.trials.size();
    r.n_no_fire = 0;
    for (const auto& t : r.trials) r.n_no_fire += !t.fired();
    r.rates.clear();
    for (const auto& [agent, J] : goals) {
        RateSummary s{agent, J, 0, std::nullopt};
        for (const auto& t : r.trials) s.hits += t.fired() && J.contains(EquilibriumIndex(t.nu));
        const std::size_t denom = r.n_total - r.n_no_fire;
        if (denom > 0) s.rate = static_cast<double>(s.hits) / static_cast<double>(denom);
        r.rates.push_back(s);
    }
}

inline json config_echo(const SweepConfig& c) {
    json j = {{"Q_max", c.Q_max},
              {"N_Q", c.N_Q},
              {"side", std::string(to_string(c.side))},
              {"disturbance_width", c.disturbance_width},
              {"model", c.model},
              {"simulation", c.sim},
              {"param_digest", parameter_digest(c.model)},
              {"rate_pooling", "trials from every disturbance side share one quotient E = N_J / (N - N_0); "
                               "N_0 counts trials in which no controller fired"}};
    auto ctrl = [](const IcSpec& s) {
        return json{{"J", s.J.members()},
                    {"tau_d", s.tau_d},
                    {"impulse", s.impulse},
                    {"table_resolution", s.table->grid.resolution},
                    {"table_digest", s.table->provenance.param_digest}};
    };
    j["agent1"] = c.agent1 ? ctrl(*c.agent1) : json(nullptr);
    j["agent2"] = c.agent2 ? ctrl(*c.agent2) : json(nullptr);
    return j;
}

/**
 * One disturbance trial from `s0`: standing control everywhere, v(t) = Q I(t)
 * on `side`, and whichever intelligent controllers are configured.
 */
inline TrialRecord run_from(const SweepConfig& c, const StateVector& s0, double Q, Agent side, std::size_t trial_id,
                            const TrajectoryObserver& observer = {}) {
    const MeasurementMap map{MeasurementMode::FourDim, c.model.rod.w0, c.model.pendulum.r};
    std::optional<IntelligentController> ic1, ic2;
    if (c.agent1) ic1.emplace(Agent::First, *c.agent1, map, c.sim.dt);
    if (c.agent2) ic2.emplace(Agent::Second, *c.agent2, map, c.sim.dt);

    const double width = c.disturbance_width;
    StepController controller = [&](const StepContext& ctx) {
        StepControl out;
        out.torque[side] = Q * unit_pulse(ctx.t, 0.0, width);
        if (ic1) {
            out.torque.first += ic1->step(ctx.state, ctx.t);
            out.fired[0] = ic1->last_fired();
        }
        if (ic2) {
            out.torque.second += ic2->step(ctx.state, ctx.t);
            out.fired[1] = ic2->last_fired();
        }
        return out;
    };

    SimResult r;
    try {
        r = simulate(s0, controller, c.model, c.sim, observer);
    } catch (const Error& e) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "trial " << trial_id << " (Q = " << Q << ", side " << (side == Agent::First ? 1 : 2) << "): " << e.what();
        throw Error(e.kind(), msg.str());
    }
    TrialRecord rec;
    rec.trial_id = trial_id;
    rec.Q = Q;
    rec.side = side;
    rec.nu = r.nu.value();
    rec.fired1 = r.fired_first;
    rec.fired2 = r.fired_second;
    rec.converged = r.converged;
    rec.t_final = r.t_final;
    return rec;
}

/// run_from() starting at the trivial state x(0) = w0 e5.
inline TrialRecord run_trial(const SweepConfig& c, double Q, Agent side, std::size_t trial_id,
                             const TrajectoryObserver& observer = {}) {
    return run_from(c, StateVector::trivial(c.model.rod.w0), Q, side, trial_id, observer);
}

namespace detail {

inline std::vector<std::pair<double, Agent>> trial_plan(const SweepConfig& c) {
    std::vector<std::pair<double, Agent>> plan;
    const auto q = c.q_samples();
    auto add = [&](Agent a) {
        for (double Q : q) plan.emplace_back(Q, a);
    };
    if (c.side != DisturbanceSide::Second) add(Agent::First);
    if (c.side != DisturbanceSide::First) add(Agent::Second);
    return plan;
}

inline std::vector<TrialRecord> run_trials(const SweepConfig& c) {
    const auto plan = trial_plan(c);
    std::vector<TrialRecord> out(plan.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::size_t k = next++; k < plan.size(); k = next++)
                out[k] = run_trial(c, plan[k].first, plan[k].second, k);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = plan.size();
        }
    };
    const unsigned jobs = std::max(1u, c.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace detail

/// Individual performance: impulse responses with agent 1's (delayed) IC.
inline SweepResult impulse_response_sweep(const SweepConfig& c) {
    c.validate();
    if (!c.agent1) throw Error(ErrorKind::InvalidArgument, "impulse response sweep needs an agent-1 controller");
    SweepResult r;
    r.trials = detail::run_trials(c);
    r.config_echo = config_echo(c);
    aggregate(r, {{1, c.agent1->J}});
    return r;
}

struct DelayPoint {
    double tau_d;
    std::optional<double> E;
    std::size_t hits;
    std::size_t n_no_fire;
};

struct DelayScanResult {
    std::vector<DelayPoint> points;
    std::optional<std::size_t> best; ///< index of the largest defined E (first on ties)
};

/// E(tau_d) of agent 1's delayed IC over a list of delays.
inline DelayScanResult delay_scan(const SweepConfig& base, const std::vector<double>& delays) {
    if (!base.agent1) throw Error(ErrorKind::InvalidArgument, "delay scan needs an agent-1 controller");
    DelayScanResult out;
    for (double tau : delays) {
        SweepConfig c = base;
        c.agent1->tau_d = tau;
        const SweepResult r = impulse_response_sweep(c);
        const RateSummary& s = r.rate_of(1);
        out.points.push_back({tau, s.rate, s.hits, r.n_no_fire});
        if (s.rate && (!out.best || *s.rate > *out.points[*out.best].E)) out.best = out.points.size() - 1;
    }
    return out;
}

/// Competition: both agents carry controllers; disturbances on both sides are pooled.
inline SweepResult competition_run(SweepConfig c) {
    if (!c.agent1 || !c.agent2) throw Error(ErrorKind::InvalidArgument, "competition needs controllers on both agents");
    c.side = DisturbanceSide::Both;
    c.validate();
    SweepResult r;
    r.trials = detail::run_trials(c);
    r.config_echo = config_echo(c);
    aggregate(r, {{1, c.agent1->J}, {2, c.agent2->J}});
    return r;
}

namespace detail {

inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

} // namespace detail

inline void export_csv(const SweepResult& r, std::ostream& out) {
    out << "trial_id,Q,side,nu,fired,t_converge,label\n";
    for (const auto& t : r.trials) {
        out << t.trial_id << ',' << detail::format_double(t.Q) << ',' << (t.side == Agent::First ? "agent1" : "agent2")
            << ',' << t.nu << ',' << (t.fired() ? 1 : 0) << ',';
        if (t.converged) out << detail::format_double(t.t_final);
        out << ',' << WinLossMatrix::label(EquilibriumIndex(t.nu)) << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing CSV");
}

inline json to_json(const SweepResult& r) {
    json trials = json::array();
    for (const auto& t : r.trials) {
        trials.push_back({{"trial_id", t.trial_id},
                          {"Q", t.Q},
                          {"side", t.side == Agent::First ? "agent1" : "agent2"},
                          {"nu", t.nu},
                          {"fired", t.fired()},
                          {"fired1", t.fired1},
                          {"fired2", t.fired2},
                          {"converged", t.converged},
                          {"t_converge", t.converged ? json(t.t_final) : json(nullptr)},
                          {"t_final", t.t_final},
                          {"label", WinLossMatrix::label(EquilibriumIndex(t.nu))},
                          {"outcome", to_string(WinLossMatrix::outcome(EquilibriumIndex(t.nu)))}});
    }
    json rates = json::array();
    for (const auto& s : r.rates) {
        rates.push_back({{"agent", s.agent},
                         {"J", s.J.members()},
                         {"hits", s.hits},
                         {"E", s.rate ? json(*s.rate) : json(nullptr)},
                         {"status", s.rate ? "ok" : "no-denominator"}});
    }
    return {{"config", r.config_echo},
            {"trials", trials},
            {"aggregates", {{"n_total", r.n_total}, {"n_no_fire", r.n_no_fire}, {"rates", rates}}},
            {"metadata",
             {{"n_no_fire_rule", "trials in which no intelligent controller produced any pulse"},
              {"hits_rule", "trials with at least one pulse whose final equilibrium is in J"}}}};
}

inline void export_json(const SweepResult& r, std::ostream& out) {
    out << to_json(r).dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "failed writing JSON");
}

inline void export_trajectory_csv(const std::vector<TrajectorySample>& samples, std::ostream& out) {
    out << "t,x1,v1,th1,w1,x2,v2,th2,w2,T1,T2,fired1,fired2\n";
    for (const auto& s : samples) {
        out << detail::format_double(s.t);
        for (double v : s.state.v) out << ',' << detail::format_double(v);
        out << ',' << detail::format_double(s.total_torque.first) << ',' << detail::format_double(s.total_torque.second)
            << ',' << (s.fired[0] ? 1 : 0) << ',' << (s.fired[1] ? 1 : 0) << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing trajectory CSV");
}

inline void export_csv(const DelayScanResult& r, std::ostream& out) {
    out << "tau_d,E,hits,n_no_fire,status\n";
    for (const auto& p : r.points) {
        out << detail::format_double(p.tau_d) << ',' << (p.E ? detail::format_double(*p.E) : "") << ',' << p.hits << ','
            << p.n_no_fire << ',' << (p.E ? "ok" : "no-denominator") << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing CSV");
}

inline json to_json(const DelayScanResult& r) {
    json points = json::array();
    for (const auto& p : r.points) {
        points.push_back({{"tau_d", p.tau_d},
                          {"E", p.E ? json(*p.E) : json(nullptr)},
                          {"hits", p.hits},
                          {"n_no_fire", p.n_no_fire},
                          {"status", p.E ? "ok" : "no-denominator"}});
    }
    return {{"points", points}, {"best_tau_d", r.best ? json(r.points[*r.best].tau_d) : json(nullptr)}};
}

/// Slice as CSV: one row per cell with both cell indices, their centers and the label.
inline void export_csv(const ReachableSlice& s, const GridSpec& g, std::ostream& out) {
    out << "row,col,y" << s.row_dim << ",y" << s.col_dim << ",nu\n";
    for (int r = 1; r <= s.rows; ++r) {
        for (int c = 1; c <= s.cols; ++c) {
            const double yr = g.lower[s.row_dim] + (r - 0.5) * g.width(s.row_dim);
            const double yc = g.lower[s.col_dim] + (c - 0.5) * g.width(s.col_dim);
            out << r << ',' << c << ',' << detail::format_double(yr) << ',' << detail::format_double(yc) << ','
                << s.at(r, c).value() << '\n';
        }
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing CSV");
}

/// Rebuilds trial records from exported JSON (used to re-derive aggregates).
inline std::vector<TrialRecord> trials_from_json(const json& j) {
    std::vector<TrialRecord> out;
    for (const auto& t : j.at("trials")) {
        TrialRecord rec;
        rec.trial_id = t.at("trial_id").get<std::size_t>();
        rec.Q = t.at("Q").get<double>();
        rec.side = t.at("side").get<std::string>() == "agent1" ? Agent::First : Agent::Second;
        rec.nu = t.at("nu").get<int>();
        rec.fired1 = t.at("fired1").get<bool>();
        rec.fired2 = t.at("fired2").get<bool>();
        rec.converged = t.at("converged").get<bool>();
        rec.t_final = t.at("t_final").get<double>();
        out.push_back(rec);
    }
    return out;
}

} // namespace cipw

#endif // CIPW_EXPERIMENTS_HPP

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

#ifndef CIPW_LEARNING_HPP
#define CIPW_LEARNING_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "cipw/digest.hpp"
#include "cipw/grid.hpp"
#include "cipw/measurement.hpp"
#include "cipw/simulate.hpp"
#include "cipw/table.hpp"

namespace cipw {

struct LearnStats {
    std::size_t cells = 0;
    std::size_t infeasible = 0;   ///< rigid reconstruction impossible
    std::size_t unconverged = 0;  ///< horizon elapsed
    std::size_t failed = 0;       ///< simulation aborted (non-finite, angle branch)
};

struct LearnOptions {
    unsigned jobs = 1;
    /// Called with (cells done, total); serialized across workers.
    std::function<void(std::size_t, std::size_t)> progress;
};

/// Controller applying one impulse P on agent 1 at t = 0, nothing else.
inline StepController single_impulse(const ImpulseParams& impulse) {
    return [impulse](const StepContext& ctx) {
        StepControl c;
        const double pulse = unit_pulse(ctx.t, 0.0, impulse.delta_tau);
        c.torque.first = impulse.P * pulse;
        c.fired[0] = pulse != 0.0;
        return c;
    };
}

enum class CellOutcome { Converged, Unconverged, Infeasible, Failed };

/// Label of a single cell: simulate from the rigid reconstruction of its center.
inline std::pair<EquilibriumIndex, CellOutcome> learn_cell(const CellIndex& i, const GridSpec& g,
                                                           const MeasurementMap& map, const ModelParams& mp,
                                                           const ImpulseParams& impulse, const SimSettings& sim) {
    StateVector xi0;
    try {
        xi0 = map.reconstruct(cell_center(i, g));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ConstraintInfeasible) return {EquilibriumIndex(), CellOutcome::Infeasible};
        throw;
    }
    try {
        const SimResult r = simulate(xi0, single_impulse(impulse), mp, sim);
        return {r.nu, r.converged ? CellOutcome::Converged : CellOutcome::Unconverged};
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NonFiniteState || e.kind() == ErrorKind::AngleOutOfBranch
            || e.kind() == ErrorKind::DegenerateRod)
            return {EquilibriumIndex(), CellOutcome::Failed};
        throw;
    }
}

/**
 * Offline learning of the quantized classifier. Every cell is an independent
 * simulation, so the table does not depend on `jobs` or evaluation order.
 */
inline ClassifierTable learn_table(const GridSpec& g, MeasurementMode mode, const ModelParams& mp,
                                   const ImpulseParams& impulse, const SimSettings& sim,
                                   const LearnOptions& opts = {}, LearnStats* stats = nullptr) {
    g.validate();
    mp.validate();
    impulse.validate();
    sim.validate();
    if (g.dim() != dimension(mode)) throw Error(ErrorKind::InvalidArgument, "grid dimension does not match measurement mode");

    const MeasurementMap map{mode, mp.rod.w0, mp.pendulum.r};
    const std::size_t n = g.cell_count();
    ClassifierTable table;
    table.grid = g;
    table.mode = mode;
    table.labels.assign(n, 0);
    table.provenance = {parameter_digest(mp), impulse, sim, kTableFormatVersion};

    std::vector<CellOutcome> outcomes(n, CellOutcome::Converged);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            for (std::size_t k = next++; k < n; k = next++) {
                const auto [nu, outcome] = learn_cell(cell_from_linear(k, g), g, map, mp, impulse, sim);
                table.labels[k] = static_cast<std::uint8_t>(nu.value());
                outcomes[k] = outcome;
                const std::size_t d = ++done;
                if (opts.progress) {
                    std::lock_guard lock(progress_mutex);
                    opts.progress(d, n);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
        }
    };

    const unsigned jobs = std::max(1u, opts.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    if (stats) {
        *stats = {};
        stats->cells = n;
        for (auto o : outcomes) {
            stats->infeasible += o == CellOutcome::Infeasible;
            stats->unconverged += o == CellOutcome::Unconverged;
            stats->failed += o == CellOutcome::Failed;
        }
    }
    return table;
}

} // namespace cipw

#endif // CIPW_LEARNING_HPP

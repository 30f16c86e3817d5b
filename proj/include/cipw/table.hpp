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

#ifndef CIPW_TABLE_HPP
#define CIPW_TABLE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cipw/equilibrium.hpp"
#include "cipw/error.hpp"
#include "cipw/grid.hpp"
#include "cipw/measurement.hpp"
#include "cipw/params.hpp"
#include "cipw/state.hpp"

namespace cipw {

inline constexpr int kTableFormatVersion = 1;

/// What a table was learned from.
struct TableProvenance {
    std::string param_digest;
    ImpulseParams impulse;
    SimSettings sim;
    int version = kTableFormatVersion;

    friend bool operator==(const TableProvenance&, const TableProvenance&) = default;
};

/// Quantized classifier: one equilibrium label per grid cell (0 = unknown).
struct ClassifierTable {
    GridSpec grid;
    MeasurementMode mode = MeasurementMode::FourDim;
    std::vector<std::uint8_t> labels;
    TableProvenance provenance;

    void validate() const {
        grid.validate();
        if (grid.dim() != dimension(mode))
            throw Error(ErrorKind::InvalidArgument, "grid dimension does not match measurement mode");
        if (labels.size() != grid.cell_count())
            throw Error(ErrorKind::InvalidArgument, "label count does not match grid");
        for (auto l : labels)
            if (l > 9) throw Error(ErrorKind::InvalidArgument, "label outside 0..9");
    }

    EquilibriumIndex at(const CellIndex& i) const { return EquilibriumIndex(labels.at(linear_index(i, grid))); }

    friend bool operator==(const ClassifierTable&, const ClassifierTable&) = default;
};

/// C*(x): label of the cell containing H x, or 0 when H x leaves the box.
inline EquilibriumIndex quantized_classify(const StateVector& s, const ClassifierTable& table, const MeasurementMap& m) {
    if (m.mode != table.mode) throw Error(ErrorKind::InvalidArgument, "table and measurement map modes differ");
    const Measurement y = m.measure(s);
    const auto cell = cell_of(y.values(), table.grid);
    if (!cell) return EquilibriumIndex::unclassified();
    return EquilibriumIndex(table.labels[linear_index(*cell, table.grid)]);
}

/// Labels of the table restricted to a 2-D plane through the grid.
struct ReachableSlice {
    std::size_t row_dim = 0;  ///< grid dimension varying along rows
    std::size_t col_dim = 1;  ///< grid dimension varying along columns
    int rows = 0;
    int cols = 0;
    CellIndex anchor;         ///< cell the plane passes through (free dims set to 1)
    std::vector<std::uint8_t> labels; ///< rows * cols, column index fastest

    EquilibriumIndex at(int row, int col) const {
        return EquilibriumIndex(labels.at(static_cast<std::size_t>(row - 1) * cols + (col - 1)));
    }
};

/**
 * Slice of the quantized reachable sets through the point `through`: the two
 * free dimensions sweep their full range, every other coordinate is fixed to
 * the cell containing `through`.
 */
inline ReachableSlice reachable_slice(const ClassifierTable& table, std::size_t row_dim, std::size_t col_dim,
                                      const Measurement& through) {
    const GridSpec& g = table.grid;
    if (row_dim >= g.dim() || col_dim >= g.dim() || row_dim == col_dim)
        throw Error(ErrorKind::InvalidArgument, "slice needs two distinct grid dimensions");
    Measurement probe = through;
    if (probe.size != g.dim()) throw Error(ErrorKind::InvalidArgument, "slice point has wrong dimension");
    // Free coordinates may be anything; pin them inside the box for the lookup.
    probe[row_dim] = g.lower[row_dim];
    probe[col_dim] = g.lower[col_dim];
    const auto cell = cell_of(probe.values(), g);
    if (!cell) throw Error(ErrorKind::OutOfRange, "fixed slice coordinates lie outside the grid box");

    ReachableSlice out;
    out.row_dim = row_dim;
    out.col_dim = col_dim;
    out.rows = g.resolution[row_dim];
    out.cols = g.resolution[col_dim];
    out.anchor = *cell;
    out.labels.reserve(static_cast<std::size_t>(out.rows) * out.cols);
    CellIndex i = *cell;
    for (int r = 1; r <= out.rows; ++r) {
        for (int c = 1; c <= out.cols; ++c) {
            i[row_dim] = r;
            i[col_dim] = c;
            out.labels.push_back(table.labels[linear_index(i, g)]);
        }
    }
    return out;
}

} // namespace cipw

#endif // CIPW_TABLE_HPP

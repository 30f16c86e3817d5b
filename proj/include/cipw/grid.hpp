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

#ifndef CIPW_GRID_HPP
#define CIPW_GRID_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cipw/error.hpp"
#include "cipw/measurement.hpp"

namespace cipw {

/// 1-based multi-index of a grid cell.
using CellIndex = std::vector<int>;

/// Uniform grid over the box [a_1, b_1] x ... x [a_M, b_M].
struct GridSpec {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<int> resolution;

    std::size_t dim() const { return resolution.size(); }

    void validate() const {
        require(!resolution.empty(), "grid must have at least one dimension");
        require(lower.size() == dim() && upper.size() == dim(), "grid bounds and resolutions differ in length");
        for (std::size_t j = 0; j < dim(); ++j) {
            require(std::isfinite(lower[j]) && std::isfinite(upper[j]) && lower[j] < upper[j],
                    "grid bounds must satisfy a_j < b_j");
            require(resolution[j] >= 1, "grid resolution must be at least 1");
        }
        (void)cell_count();
    }

    std::size_t cell_count() const {
        std::size_t n = 1;
        for (int m : resolution) {
            if (m < 1 || n > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(m))
                throw Error(ErrorKind::OutOfRange, "grid cell count is not addressable");
            n *= static_cast<std::size_t>(m);
        }
        return n;
    }

    double width(std::size_t j) const { return (upper[j] - lower[j]) / resolution[j]; }

    /// Same box with a common resolution m in every direction.
    static GridSpec uniform(std::vector<double> lower, std::vector<double> upper, int m) {
        GridSpec g{std::move(lower), std::move(upper), {}};
        g.resolution.assign(g.lower.size(), m);
        return g;
    }

    /// Four-dim measuring range circumscribing the Q = 0.06 impulse response.
    static GridSpec default_box(int m) {
        return uniform({-0.13, -3.28, -0.35, -3.80}, {0.43, 10.58, 0.31, 5.15}, m);
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Row-major linearization, last dimension fastest.
inline std::size_t linear_index(const CellIndex& i, const GridSpec& g) {
    if (i.size() != g.dim()) throw Error(ErrorKind::OutOfRange, "cell index has wrong dimension");
    std::size_t k = 0;
    for (std::size_t j = 0; j < g.dim(); ++j) {
        if (i[j] < 1 || i[j] > g.resolution[j]) throw Error(ErrorKind::OutOfRange, "cell index out of range");
        k = k * static_cast<std::size_t>(g.resolution[j]) + static_cast<std::size_t>(i[j] - 1);
    }
    return k;
}

inline CellIndex cell_from_linear(std::size_t k, const GridSpec& g) {
    CellIndex i(g.dim());
    for (std::size_t j = g.dim(); j-- > 0;) {
        const auto m = static_cast<std::size_t>(g.resolution[j]);
        i[j] = static_cast<int>(k % m) + 1;
        k /= m;
    }
    return i;
}

inline Measurement cell_center(const CellIndex& i, const GridSpec& g) {
    (void)linear_index(i, g);
    if (g.dim() > 6) throw Error(ErrorKind::OutOfRange, "grid dimension exceeds measurement capacity");
    Measurement y;
    y.size = g.dim();
    for (std::size_t j = 0; j < g.dim(); ++j) y[j] = g.lower[j] + (i[j] - 0.5) * g.width(j);
    return y;
}

/// Cell containing y; a point on an interior face belongs to the higher
/// cell, y_j = b_j to the last one. nullopt outside the box.
inline std::optional<CellIndex> cell_of(std::span<const double> y, const GridSpec& g) {
    if (y.size() != g.dim()) throw Error(ErrorKind::InvalidArgument, "measurement dimension does not match grid");
    CellIndex i(g.dim());
    for (std::size_t j = 0; j < g.dim(); ++j) {
        const double a = g.lower[j], b = g.upper[j];
        if (!(y[j] >= a && y[j] <= b)) return std::nullopt;
        const int m = g.resolution[j];
        const double f = std::floor((y[j] - a) * m / (b - a));
        i[j] = y[j] == b ? m : std::min(m, static_cast<int>(f) + 1);
    }
    return i;
}

} // namespace cipw

#endif // CIPW_GRID_HPP

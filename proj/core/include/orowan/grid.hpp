#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace orowan {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Uniform 1-D grid: n nodes spanning [center - half_width, center + half_width],
/// spacing h = 2*half_width/(n-1). Power-of-two n preferred (fast-transform paths).
struct Grid1D {
    double center = 0.0;
    double half_width = 0.0;
    int n = 0;

    Grid1D() = default;

    Grid1D(double center_, double half_width_, int n_)
        : center(center_), half_width(half_width_), n(n_) {
        if (!(half_width > 0.0)) throw std::invalid_argument("Grid1D: half_width must be positive");
        if (n < 8) throw std::invalid_argument("Grid1D: need at least 8 nodes");
    }

    double h() const { return 2.0 * half_width / (n - 1); }
    double x_min() const { return center - half_width; }
    double x_max() const { return center + half_width; }
    double x(int i) const { return x_min() + i * h(); }

    bool operator==(const Grid1D&) const = default;
};

/// Sampled function on a Grid1D with declared far-field limits and an optional
/// algebraic tail exponent: value(x) - limit ~ A/|x|^tail_power beyond the grid.
/// Limits default to NaN ("missing"); operators that need far-field data reject
/// fields without them.
struct ScalarField {
    Grid1D grid;
    std::vector<double> values;
    double left_limit = std::numeric_limits<double>::quiet_NaN();
    double right_limit = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> tail_power;

    int size() const { return grid.n; }
    double x(int i) const { return grid.x(i); }
    bool has_limits() const { return std::isfinite(left_limit) && std::isfinite(right_limit); }
};

inline ScalarField make_field(Grid1D grid, std::vector<double> values, double left_limit,
                              double right_limit,
                              std::optional<double> tail_power = std::nullopt) {
    if (static_cast<int>(values.size()) != grid.n)
        throw std::invalid_argument("make_field: value count does not match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("make_field: values must be finite");
    ScalarField f;
    f.grid = grid;
    f.values = std::move(values);
    f.left_limit = left_limit;
    f.right_limit = right_limit;
    f.tail_power = tail_power;
    return f;
}

template <class F>
ScalarField sample_field(const Grid1D& grid, F&& fn, double left_limit, double right_limit,
                         std::optional<double> tail_power = std::nullopt) {
    std::vector<double> v(grid.n);
    for (int i = 0; i < grid.n; ++i) v[i] = fn(grid.x(i));
    return make_field(grid, std::move(v), left_limit, right_limit, tail_power);
}

}  // namespace orowan

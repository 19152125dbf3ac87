#pragma once

#include "orowan/grid.hpp"

namespace orowan {

/// Far-field model value for x outside the grid: limit plus the calibrated
/// algebraic tail A/|x|^p when tail_power is declared (A fitted at the edge).
double field_extension(const ScalarField& f, double x);

/// Evaluate anywhere: cubic (Catmull-Rom) inside the grid, far-field model outside.
double field_value(const ScalarField& f, double x);

/// Integral over the whole line: trapezoid over the grid plus the analytic
/// algebraic-tail remainder. Requires zero limits (or compact support);
/// throws on a divergent declaration (tail_power <= 1 with a nonzero tail).
double trapezoid_integral(const ScalarField& f);

/// Running trapezoid antiderivative with G(x_min) = base.
ScalarField cumulative_integral(const ScalarField& f, double base);

/// Second-order central differences, one-sided at the edges.
ScalarField central_derivative(const ScalarField& f);

/// max |a - b| over nodes inside the window; grids must match.
double sup_distance(const ScalarField& a, const ScalarField& b, const Interval& window);

bool is_non_decreasing(const ScalarField& f, double tol = 1e-12);

/// f(x + dx) resampled onto the same grid (cubic inside, far-field model outside).
ScalarField shift_field(const ScalarField& f, double dx);

}  // namespace orowan

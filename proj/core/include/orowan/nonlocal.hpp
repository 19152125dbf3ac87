#pragma once

#include <cstddef>
#include <span>

#include "orowan/grid.hpp"

namespace orowan {

enum class OperatorBackend { PvQuadrature, Spectral };

/// Half-Laplacian I1 = -(-Laplace)^{1/2}: Fourier symbol -|xi|,
/// kernel form (1/pi) PV int (f(y) - f(x))/(y-x)^2 dy.
///
/// PvQuadrature: symmetric second-difference quadrature with exact partial-sum
/// handling of the constant far field and closed-form corrections for declared
/// algebraic tails (the on-grid correlations are evaluated by zero-padded FFT;
/// i1_apply_pv_direct computes the identical formula with plain loops).
/// Spectral: symbol applied on the periodic extension; requires matching limits.
ScalarField i1_apply(const ScalarField& f, OperatorBackend backend = OperatorBackend::PvQuadrature);

/// Reference O(n^2) evaluation of the pv quadrature (same algebra as i1_apply).
ScalarField i1_apply_pv_direct(const ScalarField& f);

/// Performance path for layered fields (left_limit != right_limit): subtracts a
/// reference arctan ramp with closed-form I1, tapers the residual near the grid
/// edges and applies the spectral symbol to its periodic extension.
ScalarField i1_apply_ramped_spectral(const ScalarField& f);

struct I1Split {
    double short_range = 0.0;  // (1/2pi) int_{|y|<r} (f(x+y)+f(x-y)-2f(x))/y^2 dy
    double long_range = 0.0;   // (1/pi) int_{|y-x|>r} (f(y)-f(x))/(y-x)^2 dy
};

/// Short/long-range split at radius r (r >= 2h); short + long equals i1_apply
/// at x up to quadrature tolerance.
I1Split i1_split(const ScalarField& f, double x, double r);

/// Hilbert transform with symbol i*sgn(xi): H[v](x) = (1/pi) PV int v(y)/(y-x) dy.
/// Default path is spectral on the periodic extension; the pv fallback uses the
/// punctured odd trapezoid with tail corrections. Limits must match (the PV
/// integral diverges otherwise).
ScalarField hilbert_apply(const ScalarField& f);
ScalarField hilbert_apply(const ScalarField& f, OperatorBackend backend);

/// Spectral derivative (symbol i*xi) on the periodic extension.
ScalarField spectral_derivative(const ScalarField& f);

/// Index of the particle closest to xbar; equidistant ties pick the left one.
std::size_t nearest_particle_index(std::span<const double> positions, double xbar);

/// (1/pi) sum_{i != i0} eps/(x_i - xbar), i0 the nearest particle.
double particle_sum_full(std::span<const double> positions, double epsilon, double xbar);

/// (1/pi) sum_{|x_i - xbar| >= r} eps/(x_i - xbar).
double particle_sum_truncated(std::span<const double> positions, double epsilon, double xbar,
                              double r);

/// (1/pi) sum_{i != i0, |x_i - xbar| < r} eps/(x_i - xbar).
double short_window_sum(std::span<const double> positions, double epsilon, double xbar, double r);

}  // namespace orowan

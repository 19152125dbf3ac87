#pragma once

#include "orowan/nonlocal.hpp"
#include "orowan/potential.hpp"
#include "orowan/report.hpp"

namespace orowan {

/// Monotone transition layer: I1[phi] = W'(phi), phi(-inf) = 0, phi(+inf) = 1,
/// phi(0) = 1/2, with the 1/(alpha pi x) far-field asymptote.
struct LayerProfile {
    ScalarField field;             // phi on a grid centered at 0, tail_power = 1
    double alpha = 0.0;            // W''(0) of the generating potential
    double c0 = 0.0;               // (int phi'^2)^{-1}
    double tail_constant_K1 = 0.0; // max (1+x^2) phi'(x)
    double residual = 0.0;         // sup |I1[phi] - W'(phi)| on the interior

    /// cubic on-grid, H(x) - 1/(alpha pi x) beyond the grid
    double value(double x) const;
};

/// First-order response of the layer to an applied stress L:
/// I1[psi] = W''(phi) psi + (L/alpha)(W''(phi) - W''(0)) + c0 L phi', psi(+-inf) = 0.
struct CorrectorProfile {
    ScalarField field;     // psi, tail_power = 1
    double stress_L = 0.0;
    double K2 = 0.0;       // fitted x*psi(x) tail constant
    double K3 = 0.0;       // fitted x^2 |psi - K2/x| envelope
    double residual = 0.0;
};

/// Exact classical layer: 1/2 + arctan(2x/d)/pi.
double nabarro_closed_form(double d, double x);

/// Damped fixed-point relaxation phi <- phi + tau (I1[phi] - W'(phi)), tau = h/(2 pi),
/// initialized at the closed-form layer with matching curvature, recentered to
/// phi(0) = 1/2 each sweep, far field pinned to the asymptote. Residual < 1e-6.
LayerProfile solve_layer_profile(const PotentialSpec& p, const Grid1D& grid);

double compute_c0(const LayerProfile& layer);

CorrectorProfile solve_corrector(const PotentialSpec& p, const LayerProfile& layer, double L);

/// Tail checks: x^2 |phi - H + 1/(alpha pi x)| bounded on |x| >= 1, and
/// 0 < K0 <= (1+x^2) phi'(x) <= K1.
ValidationReport verify_layer_tails(const LayerProfile& layer);

}  // namespace orowan

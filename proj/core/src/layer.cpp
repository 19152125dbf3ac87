#include "orowan/layer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "orowan/numerics.hpp"

namespace orowan {

namespace {

constexpr double kPi = std::numbers::pi;

double heaviside(double x) { return x > 0.0 ? 1.0 : 0.0; }

// fourth-order first derivative (second-order near the edges)
ScalarField derivative4(const ScalarField& f) {
    const int n = f.size();
    const double h = f.grid.h();
    std::vector<double> d(n);
    for (int j = 2; j < n - 2; ++j)
        d[j] = (-f.values[j + 2] + 8.0 * f.values[j + 1] - 8.0 * f.values[j - 1] +
                f.values[j - 2]) /
               (12.0 * h);
    d[0] = (-3.0 * f.values[0] + 4.0 * f.values[1] - f.values[2]) / (2.0 * h);
    d[1] = (f.values[2] - f.values[0]) / (2.0 * h);
    d[n - 2] = (f.values[n - 1] - f.values[n - 3]) / (2.0 * h);
    d[n - 1] = (3.0 * f.values[n - 1] - 4.0 * f.values[n - 2] + f.values[n - 3]) / (2.0 * h);
    std::optional<double> tp;
    if (f.tail_power) tp = *f.tail_power + 1.0;
    return make_field(f.grid, std::move(d), 0.0, 0.0, tp);
}

// leftmost 1/2-crossing, linear bracket plus two Newton refinements on the cubic
double half_level_crossing(const ScalarField& phi) {
    const int n = phi.size();
    int k = -1;
    for (int j = 0; j < n; ++j) {
        if (phi.values[j] >= 0.5) { k = j; break; }
    }
    if (k <= 0) throw std::runtime_error("layer: 1/2-level crossing not bracketed by the grid");
    const double h = phi.grid.h();
    const double v0 = phi.values[k - 1], v1 = phi.values[k];
    double x = phi.x(k - 1) + h * (0.5 - v0) / (v1 - v0);
    for (int it = 0; it < 2; ++it) {
        const double dv = (field_value(phi, x + 0.25 * h) - field_value(phi, x - 0.25 * h)) /
                          (0.5 * h);
        if (dv <= 0.0) break;
        x -= (field_value(phi, x) - 0.5) / dv;
    }
    return x;
}

}  // namespace

double nabarro_closed_form(double d, double x) {
    if (!(d > 0.0)) throw std::invalid_argument("nabarro_closed_form: d must be positive");
    return 0.5 + std::atan(2.0 * x / d) / kPi;
}

double LayerProfile::value(double x) const {
    if (x < field.grid.x_min() || x > field.grid.x_max())
        return heaviside(x) - 1.0 / (alpha * kPi * x);
    return field_value(field, x);
}

LayerProfile solve_layer_profile(const PotentialSpec& p, const Grid1D& grid) {
    if (grid.center != 0.0)
        throw std::invalid_argument("solve_layer_profile: layer grids must be centered at 0");
    if (!validate_potential(p, 1024).all_pass())
        throw std::invalid_argument("solve_layer_profile: potential failed validation");

    const double alpha = p.alpha;
    const int n = grid.n;
    const double h = grid.h();
    const double tau = 0.5 * h / kPi;
    const double x_pin = 0.9 * grid.half_width;
    const double x_interior = 0.85 * grid.half_width;
    const double tol = 1e-6;
    const int max_sweeps = 100000;

    auto asymptote = [&](double x) { return heaviside(x) - 1.0 / (alpha * kPi * x); };

    // closed-form layer with matching curvature; exact for classical potentials
    ScalarField phi = sample_field(
        grid, [&](double x) { return nabarro_closed_form(2.0 / alpha, x); }, 0.0, 1.0, 1.0);

    auto pin_far_field = [&](ScalarField& f) {
        for (int j = 0; j < n; ++j)
            if (std::abs(f.x(j)) > x_pin) f.values[j] = asymptote(f.x(j));
    };
    pin_far_field(phi);

    double residual = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const ScalarField i1 = i1_apply(phi);
        residual = 0.0;
        std::vector<double> r(n);
        for (int j = 0; j < n; ++j) {
            r[j] = i1.values[j] - eval_potential(p, phi.values[j], 1);
            if (std::abs(phi.x(j)) <= x_interior) residual = std::max(residual, std::abs(r[j]));
        }
        if (residual < tol) break;
        for (int j = 0; j < n; ++j)
            if (std::abs(phi.x(j)) <= x_pin) phi.values[j] += tau * r[j];
        phi = shift_field(phi, half_level_crossing(phi));
        pin_far_field(phi);
    }
    if (!(residual < tol))
        throw std::runtime_error("solve_layer_profile: no convergence after max sweeps, residual " +
                                 std::to_string(residual));

    // exact recentring of the converged profile
    phi = shift_field(phi, half_level_crossing(phi));
    pin_far_field(phi);

    for (int j = 1; j < n; ++j)
        if (!(phi.values[j] > phi.values[j - 1]))
            throw std::runtime_error("solve_layer_profile: profile not strictly increasing");

    LayerProfile layer;
    layer.field = phi;
    layer.alpha = alpha;
    layer.c0 = compute_c0(layer);
    {
        const ScalarField dphi = derivative4(phi);
        double k1 = 0.0;
        for (int j = 0; j < n; ++j)
            k1 = std::max(k1, (1.0 + phi.x(j) * phi.x(j)) * dphi.values[j]);
        layer.tail_constant_K1 = k1;
    }
    {
        const ScalarField i1 = i1_apply(phi);
        double res = 0.0;
        for (int j = 0; j < n; ++j)
            if (std::abs(phi.x(j)) <= x_interior)
                res = std::max(res, std::abs(i1.values[j] - eval_potential(p, phi.values[j], 1)));
        layer.residual = res;
    }
    return layer;
}

double compute_c0(const LayerProfile& layer) {
    const ScalarField dphi = derivative4(layer.field);
    std::vector<double> sq(dphi.size());
    for (int j = 0; j < dphi.size(); ++j) sq[j] = dphi.values[j] * dphi.values[j];
    // phi' ~ 1/(alpha pi x^2), so the squared tail decays like x^{-4}
    const ScalarField sq_field = make_field(layer.field.grid, std::move(sq), 0.0, 0.0, 4.0);
    const double integral = trapezoid_integral(sq_field);
    if (!(integral > 0.0)) throw std::runtime_error("compute_c0: degenerate layer derivative");
    return 1.0 / integral;
}

CorrectorProfile solve_corrector(const PotentialSpec& p, const LayerProfile& layer, double L) {
    const ScalarField& phi = layer.field;
    const Grid1D& grid = phi.grid;
    const int n = grid.n;
    const double h = grid.h();
    const double alpha = layer.alpha;
    const double tau = 0.5 * h / kPi;
    const double x_interior = 0.85 * grid.half_width;

    CorrectorProfile out;
    out.stress_L = L;
    out.field = sample_field(grid, [](double) { return 0.0; }, 0.0, 0.0, 1.0);
    if (L == 0.0) return out;

    // The equation is affine in (psi, L): solve at unit stress and scale, which
    // keeps psi(L) exactly linear in L. The unit tolerance is a fixed 2.5e-7 so
    // every |L| <= 4 reuses the identical unit iteration (the discrete problem is
    // ill-conditioned along a slow mode, so stopping at different residuals would
    // pick different representatives); beyond that it tightens with |L|.
    const double tol_unit = std::min(2.5e-7, 1e-6 / std::max(1.0, std::abs(L)));

    const ScalarField dphi = derivative4(phi);
    std::vector<double> wpp(n), rhs(n);
    for (int j = 0; j < n; ++j) {
        wpp[j] = eval_potential(p, phi.values[j], 2);
        rhs[j] = (1.0 / alpha) * (wpp[j] - alpha) + layer.c0 * dphi.values[j];
    }

    auto apply_op = [&](const ScalarField& f) {
        ScalarField af = i1_apply(f);
        for (int j = 0; j < n; ++j) af.values[j] -= wpp[j] * f.values[j];
        return af;
    };

    // Damped Richardson with Galerkin deflation. The translation mode phi' is a
    // near-kernel direction; further slow modes (domain-truncation artifacts) are
    // harvested from the residual whenever convergence stalls.
    std::vector<std::vector<double>> basis;
    std::vector<std::vector<double>> a_basis;
    auto add_deflation_vector = [&](std::vector<double> v) {
        for (const auto& b : basis) {
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += v[j] * b[j];
            for (int j = 0; j < n; ++j) v[j] -= dot * b[j];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-12) return;
        for (double& x : v) x /= norm;
        ScalarField vf = make_field(grid, v, 0.0, 0.0, 1.0);
        const ScalarField av = apply_op(vf);
        basis.push_back(std::move(v));
        a_basis.push_back(av.values);
    };
    add_deflation_vector(dphi.values);

    ScalarField psi = out.field;
    double residual = std::numeric_limits<double>::infinity();
    double stall_reference = residual;
    const int stall_window = 400;
    const int max_sweeps = 100000;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const ScalarField i1 = i1_apply(psi);
        std::vector<double> r(n);
        residual = 0.0;
        for (int j = 0; j < n; ++j) {
            r[j] = i1.values[j] - wpp[j] * psi.values[j] - rhs[j];
            if (std::abs(grid.x(j)) <= x_interior) residual = std::max(residual, std::abs(r[j]));
        }
        if (residual < tol_unit) break;
        if (sweep % stall_window == 0) {
            if (residual > 0.9 * stall_reference && basis.size() < 8) add_deflation_vector(r);
            stall_reference = residual;
        }
        for (std::size_t b = 0; b < basis.size(); ++b) {
            double r_v = 0.0, a_vv = 0.0;
            for (int j = 0; j < n; ++j) {
                r_v += r[j] * basis[b][j];
                a_vv += a_basis[b][j] * basis[b][j];
            }
            if (a_vv == 0.0) continue;
            const double s = -r_v / a_vv;
            for (int j = 0; j < n; ++j) {
                psi.values[j] += s * basis[b][j];
                r[j] += s * a_basis[b][j];
            }
        }
        for (int j = 0; j < n; ++j) psi.values[j] += tau * r[j];
    }
    if (!(residual < tol_unit))
        throw std::runtime_error("solve_corrector: no convergence after max sweeps, residual " +
                                 std::to_string(residual));

    for (int j = 0; j < n; ++j) psi.values[j] *= L;
    out.field = psi;
    {
        const ScalarField av = apply_op(psi);
        double res = 0.0;
        for (int j = 0; j < n; ++j)
            if (std::abs(grid.x(j)) <= x_interior)
                res = std::max(res, std::abs(av.values[j] - L * rhs[j]));
        out.residual = res;
    }
    {
        // K2 from the median of x*psi over the outer grid, K3 as the x^2 envelope of the rest
        std::vector<double> xpsi;
        for (int j = 0; j < n; ++j) {
            const double x = grid.x(j);
            if (std::abs(x) >= 0.4 * grid.half_width && std::abs(x) <= 0.8 * grid.half_width)
                xpsi.push_back(x * psi.values[j]);
        }
        std::sort(xpsi.begin(), xpsi.end());
        out.K2 = xpsi.empty() ? 0.0 : xpsi[xpsi.size() / 2];
        double k3 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double x = grid.x(j);
            if (std::abs(x) >= 1.0)
                k3 = std::max(k3, x * x * std::abs(psi.values[j] - out.K2 / x));
        }
        out.K3 = k3;
    }
    return out;
}

ValidationReport verify_layer_tails(const LayerProfile& layer) {
    const ScalarField& phi = layer.field;
    const int n = phi.size();
    ValidationReport rep;

    double tail_res = 0.0;
    for (int j = 0; j < n; ++j) {
        const double x = phi.x(j);
        if (std::abs(x) < 1.0) continue;
        const double asym = heaviside(x) - 1.0 / (layer.alpha * kPi * x);
        tail_res = std::max(tail_res, x * x * std::abs(phi.values[j] - asym));
    }
    rep.add("asymptote-residual-x2", tail_res, 1e6, std::isfinite(tail_res) && tail_res <= 1e6);

    const ScalarField dphi = derivative4(phi);
    double k0 = std::numeric_limits<double>::infinity(), k1 = 0.0;
    for (int j = 0; j < n; ++j) {
        const double w = (1.0 + phi.x(j) * phi.x(j)) * dphi.values[j];
        k0 = std::min(k0, w);
        k1 = std::max(k1, w);
    }
    rep.check_gt("derivative-lower-K0", k0, 0.0);
    rep.add("derivative-upper-K1", k1, 1e6, std::isfinite(k1) && k1 <= 1e6);
    return rep;
}

}  // namespace orowan

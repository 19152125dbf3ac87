#include "orowan/macro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orowan/numerics.hpp"

namespace orowan {

namespace {

double density_mass(const ScalarField& f) {
    double acc = 0.5 * (f.values.front() + f.values.back());
    for (int i = 1; i < f.size() - 1; ++i) acc += f.values[i];
    return acc * f.grid.h();
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

// conservative upwind divergence of the flux F = -c0 f H[f]
std::vector<double> density_rate(const ScalarField& f, const ScalarField& hilb, double c0) {
    const int n = f.size();
    const double h = f.grid.h();
    std::vector<double> q(n - 1);  // flux at face j+1/2
    for (int j = 0; j < n - 1; ++j) {
        const double w = -c0 * 0.5 * (hilb.values[j] + hilb.values[j + 1]);
        q[j] = w >= 0.0 ? w * f.values[j] : w * f.values[j + 1];
    }
    std::vector<double> rate(n, 0.0);
    for (int j = 1; j < n - 1; ++j) rate[j] = -(q[j] - q[j - 1]) / h;
    return rate;
}

}  // namespace

double MacroState::mass() const { return density_mass(f); }

MacroState macro_init(const ScalarField& u0, double c0) {
    if (!(c0 > 0.0)) throw std::invalid_argument("macro_init: c0 must be positive");
    if (!u0.has_limits()) throw std::invalid_argument("macro_init: far-field limits missing");
    if (!is_non_decreasing(u0, 1e-12))
        throw std::invalid_argument("macro_init: initial datum must be non-decreasing");
    MacroState s;
    s.c0 = c0;
    ScalarField f = central_derivative(u0);
    for (double& v : f.values) v = std::max(v, 0.0);
    s.f = f;
    s.u = cumulative_integral(f, u0.left_limit);
    s.u.left_limit = u0.left_limit;
    s.u.right_limit = u0.right_limit;
    s.t = 0.0;
    return s;
}

double macro_dt_bound(const MacroState& s) {
    const double peak = max_abs(hilbert_apply(s.f));
    if (peak == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * s.f.grid.h() / (s.c0 * peak);
}

MacroState macro_step(const MacroState& s, double dt) {
    const int n = s.f.size();
    for (double v : s.f.values)
        if (v < 0.0) throw std::invalid_argument("macro_step: negative density");

    const ScalarField h1 = hilbert_apply(s.f);
    const double peak = max_abs(h1);
    if (peak > 0.0 && dt > (0.5 * s.f.grid.h() / (s.c0 * peak)) * (1.0 + 1e-12))
        throw std::invalid_argument("macro_step: dt violates the transport CFL bound");

    // Heun
    const std::vector<double> r1 = density_rate(s.f, h1, s.c0);
    ScalarField f1 = s.f;
    for (int j = 0; j < n; ++j) f1.values[j] += dt * r1[j];
    const std::vector<double> r2 = density_rate(f1, hilbert_apply(f1), s.c0);
    ScalarField fn = s.f;
    for (int j = 0; j < n; ++j) fn.values[j] += 0.5 * dt * (r1[j] + r2[j]);

    // clip undershoots, redistribute the clipped mass proportionally
    const double target = density_mass(fn);
    bool clipped = false;
    for (double& v : fn.values)
        if (v < 0.0) { v = 0.0; clipped = true; }
    if (clipped) {
        const double after = density_mass(fn);
        if (after > 0.0) {
            const double scale = target / after;
            for (double& v : fn.values) v *= scale;
        }
    }

    MacroState next;
    next.c0 = s.c0;
    next.t = s.t + dt;
    next.f = fn;
    next.u = cumulative_integral(fn, s.u.left_limit);
    next.u.left_limit = s.u.left_limit;
    next.u.right_limit = s.u.right_limit;
    return next;
}

MacroRunResult macro_run(const MacroState& s0, double T, std::span<const double> snapshot_times) {
    if (!(T >= 0.0)) throw std::invalid_argument("macro_run: T must be non-negative");
    std::vector<double> requested(snapshot_times.begin(), snapshot_times.end());
    std::sort(requested.begin(), requested.end());
    for (double t : requested)
        if (t < 0.0 || t > T + 1e-12)
            throw std::invalid_argument("macro_run: snapshot time outside [0, T]");

    MacroRunResult res;
    const double mass0 = s0.mass();
    MacroState state = s0;

    auto advance_to = [&](double target) {
        while (state.t < target - 1e-15) {
            const double bound = macro_dt_bound(state);
            if (res.cfl_bound == 0.0) res.cfl_bound = bound;
            double dt = std::min(0.9 * bound, target - state.t);
            if (res.dt_used == 0.0) res.dt_used = dt;
            state = macro_step(state, dt);
            ++res.steps;
        }
        state.t = target;
    };

    for (double target : requested) {
        advance_to(target);
        res.snapshots.push_back(state);
    }
    advance_to(T);
    res.final_state = state;
    res.mass_drift = mass0 > 0.0 ? std::abs(state.mass() - mass0) / mass0 : 0.0;
    return res;
}

}  // namespace orowan

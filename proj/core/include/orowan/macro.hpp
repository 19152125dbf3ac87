#pragma once

#include "orowan/nonlocal.hpp"
#include "orowan/report.hpp"

namespace orowan {

/// State of u_t = c0 u_x I1[u], advanced through the density form
/// f_t = c0 (f H[f])_x with f = u_x >= 0 and u rebuilt by integration.
struct MacroState {
    ScalarField u;
    ScalarField f;
    double t = 0.0;
    double c0 = 0.0;

    double mass() const;  // trapezoid mass of f
};

MacroState macro_init(const ScalarField& u0, double c0);

/// Transport CFL 0.5 h / (c0 max|H[f]|).
double macro_dt_bound(const MacroState& s);

/// Conservative upwind flux with Heun (RK2) time stepping; negative densities
/// are clipped and the clipped mass redistributed proportionally.
MacroState macro_step(const MacroState& s, double dt);

struct MacroRunResult {
    MacroState final_state;
    std::vector<MacroState> snapshots;
    double dt_used = 0.0;  // first accepted dt (the bound tightens as f spreads)
    double cfl_bound = 0.0;
    long steps = 0;
    double mass_drift = 0.0;  // |mass(T) - mass(0)| / mass(0)
};

MacroRunResult macro_run(const MacroState& s0, double T, std::span<const double> snapshot_times);

}  // namespace orowan

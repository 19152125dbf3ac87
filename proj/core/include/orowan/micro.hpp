#pragma once

#include "orowan/particles.hpp"

namespace orowan {

/// State of delta u_t = I1[u] - (1/delta) W'(u/eps).
struct MicroState {
    ScalarField u;
    double epsilon = 0.0;
    double delta = 0.0;
    double t = 0.0;
};

struct MicroOptions {
    OperatorBackend backend = OperatorBackend::PvQuadrature;
    bool check_monotone = true;
    double monotone_tol = 1e-9;
};

MicroState micro_init(const ScalarField& u0, double epsilon, double delta);
MicroState micro_init(const ParticleSystem& ps, const LayerProfile& layer, const Grid1D& grid);

/// Stiff-reaction bound 0.2 eps delta^2 / max|W''|.
double micro_dt_stiff(const MicroState& s, const PotentialSpec& p);
/// Nonlocal-transport bound 0.5 delta h / pi.
double micro_dt_transport(const MicroState& s);

/// One explicit step u <- u + (dt/delta)(I1[u] - (1/delta) W'(u/eps)); edge
/// nodes held at their far-field values. Throws on a CFL violation.
MicroState micro_step(const MicroState& s, const PotentialSpec& p, double dt,
                      const MicroOptions& opt = {});

struct MicroRunResult {
    MicroState final_state;
    std::vector<MicroState> snapshots;  // one per requested time
    double dt_used = 0.0;
    double cfl_bound = 0.0;
    long steps = 0;
};

/// Steps to T with dt chosen automatically from the CFL bounds, landing exactly
/// on each snapshot time.
MicroRunResult micro_run(const MicroState& s0, const PotentialSpec& p, double T,
                         std::span<const double> snapshot_times, const MicroOptions& opt = {});

}  // namespace orowan

#include "orowan/micro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "orowan/numerics.hpp"

namespace orowan {

namespace {
constexpr double kPi = std::numbers::pi;

ScalarField apply_i1(const ScalarField& u, OperatorBackend backend) {
    if (backend == OperatorBackend::PvQuadrature) return i1_apply(u, OperatorBackend::PvQuadrature);
    const bool matching = std::abs(u.left_limit - u.right_limit) <= 1e-12;
    return matching ? i1_apply(u, OperatorBackend::Spectral) : i1_apply_ramped_spectral(u);
}
}  // namespace

MicroState micro_init(const ScalarField& u0, double epsilon, double delta) {
    if (!(epsilon > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("micro_init: epsilon and delta must be positive");
    if (!u0.has_limits()) throw std::invalid_argument("micro_init: far-field limits missing");
    if (!is_non_decreasing(u0, 1e-12))
        throw std::invalid_argument("micro_init: initial datum must be non-decreasing");
    return MicroState{u0, epsilon, delta, 0.0};
}

MicroState micro_init(const ParticleSystem& ps, const LayerProfile& layer, const Grid1D& grid) {
    return micro_init(reconstruct(ps, layer, grid), ps.epsilon, ps.delta);
}

double micro_dt_stiff(const MicroState& s, const PotentialSpec& p) {
    return 0.2 * s.epsilon * s.delta * s.delta / max_second_derivative(p);
}

double micro_dt_transport(const MicroState& s) {
    return 0.5 * s.delta * s.u.grid.h() / kPi;
}

MicroState micro_step(const MicroState& s, const PotentialSpec& p, double dt,
                      const MicroOptions& opt) {
    const double bound = std::min(micro_dt_stiff(s, p), micro_dt_transport(s));
    if (dt > bound * (1.0 + 1e-12))
        throw std::invalid_argument("micro_step: dt " + std::to_string(dt) +
                                    " violates the CFL bound " + std::to_string(bound));
    const ScalarField i1 = apply_i1(s.u, opt.backend);
    const int n = s.u.size();
    MicroState next = s;
    const double inv_delta = 1.0 / s.delta;
    // All nodes evolve; the far field enters through the fixed limit metadata used
    // by the quadrature (an explicit step under the CFL bound is then a monotone
    // update, which is what preserves non-decreasing data).
    for (int j = 0; j < n; ++j) {
        const double reaction = eval_potential(p, s.u.values[j] / s.epsilon, 1) * inv_delta;
        next.u.values[j] = s.u.values[j] + dt * inv_delta * (i1.values[j] - reaction);
    }
    next.t = s.t + dt;
    if (opt.check_monotone) {
        for (int j = 1; j < n; ++j)
            if (next.u.values[j] - next.u.values[j - 1] < -opt.monotone_tol)
                throw std::runtime_error("micro_step: monotonicity lost at x = " +
                                         std::to_string(next.u.x(j)) + ", t = " +
                                         std::to_string(next.t));
    }
    return next;
}

MicroRunResult micro_run(const MicroState& s0, const PotentialSpec& p, double T,
                         std::span<const double> snapshot_times, const MicroOptions& opt) {
    if (!(T >= 0.0)) throw std::invalid_argument("micro_run: T must be non-negative");
    std::vector<double> requested(snapshot_times.begin(), snapshot_times.end());
    std::sort(requested.begin(), requested.end());
    for (double t : requested)
        if (t < 0.0 || t > T + 1e-12)
            throw std::invalid_argument("micro_run: snapshot time outside [0, T]");

    MicroRunResult res;
    res.cfl_bound = std::min(micro_dt_stiff(s0, p), micro_dt_transport(s0));
    MicroState state = s0;

    auto advance_to = [&](double target) {
        if (target <= state.t + 1e-15) return;
        const long m =
            std::max(1L, static_cast<long>(std::ceil((target - state.t) / res.cfl_bound - 1e-12)));
        const double dt = (target - state.t) / static_cast<double>(m);
        if (res.dt_used == 0.0) res.dt_used = dt;
        for (long s = 0; s < m; ++s) state = micro_step(state, p, dt, opt);
        state.t = target;  // suppress accumulated time roundoff
        res.steps += m;
    };

    for (double target : requested) {
        advance_to(target);
        res.snapshots.push_back(state);
    }
    advance_to(T);
    res.final_state = state;
    return res;
}

}  // namespace orowan

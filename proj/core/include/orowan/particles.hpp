#pragma once

#include "orowan/layer.hpp"

namespace orowan {

/// epsilon-level points of a monotone profile: x_i = inf{x : v(x) = eps*i},
/// i = m_index .. m_index + count - 1 (M_eps .. N_eps).
struct ParticleSystem {
    double epsilon = 0.0;
    double delta = 0.0;
    std::vector<double> positions;  // strictly increasing
    long m_index = 0;               // M_eps
    double base_level = 0.0;        // eps * M_eps

    long n_index() const { return m_index + static_cast<long>(positions.size()) - 1; }
    std::size_t count() const { return positions.size(); }
};

/// M_eps = ceil((inf v + eps)/eps), N_eps = floor((sup v - eps)/eps); each level
/// located by leftmost bracketing plus linear interpolation. v must be
/// non-decreasing, non-constant, with eps < (sup v - inf v)/2.
ParticleSystem level_points(const ScalarField& v, double epsilon, double delta);

/// Gap bounds eps/L <= x_{i+1}-x_i <= eps/a on the window (a <= v_x <= L there),
/// plus the sum eps^2/(x_i-xbar)^2 <= (4 pi^2/3) L^2 spot check at random xbar.
ValidationReport spacing_bounds_check(const ParticleSystem& ps, double L, double a,
                                      const Interval& window);

/// Layered superposition sum_i eps*phi((x - x_i)/(eps delta)) + eps*M_eps
/// evaluated at every node of the target grid.
ScalarField reconstruct(const ParticleSystem& ps, const LayerProfile& layer, const Grid1D& grid);

/// ydot_i = (c0/pi) sum_{j != i} 1/(y_i - y_j); positions strictly increasing.
std::vector<double> ddd_rhs(std::span<const double> positions, double c0);

struct DddTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> positions;  // one row per time
};

/// Classical RK4 with fixed dt (repulsion CFL: dt <= 0.1 (min gap)^2 pi / c0);
/// ordering is verified at every step. Rows at sample_times when given,
/// otherwise every step (strided to at most ~2000 rows).
DddTrajectory ddd_integrate(std::vector<double> positions0, double c0, double dt, double T,
                            std::span<const double> sample_times = {});

inline double particle_sum_full(const ParticleSystem& ps, double xbar) {
    return particle_sum_full(std::span<const double>(ps.positions), ps.epsilon, xbar);
}
inline double particle_sum_truncated(const ParticleSystem& ps, double xbar, double r) {
    return particle_sum_truncated(std::span<const double>(ps.positions), ps.epsilon, xbar, r);
}
inline double short_window_sum(const ParticleSystem& ps, double xbar, double r) {
    return short_window_sum(std::span<const double>(ps.positions), ps.epsilon, xbar, r);
}

}  // namespace orowan

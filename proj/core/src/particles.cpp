#include "orowan/particles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "orowan/numerics.hpp"

namespace orowan {

namespace {
constexpr double kPi = std::numbers::pi;
}

ParticleSystem level_points(const ScalarField& v, double epsilon, double delta) {
    if (!(epsilon > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("level_points: epsilon and delta must be positive");
    if (!is_non_decreasing(v, 1e-12))
        throw std::invalid_argument("level_points: profile must be non-decreasing");
    if (!v.has_limits()) throw std::invalid_argument("level_points: far-field limits missing");

    const double inf_v = v.left_limit;
    const double sup_v = v.right_limit;
    if (!(sup_v - inf_v > 0.0))
        throw std::invalid_argument("level_points: constant profile has no level points");
    if (!(epsilon <= 0.5 * (sup_v - inf_v) + 1e-12))
        throw std::invalid_argument("level_points: epsilon too large for the profile range");

    const long m_idx = static_cast<long>(std::ceil((inf_v + epsilon) / epsilon - 1e-9));
    const long n_idx = static_cast<long>(std::floor((sup_v - epsilon) / epsilon + 1e-9));
    if (m_idx > n_idx)
        throw std::invalid_argument("level_points: empty particle system (epsilon too large)");

    ParticleSystem ps;
    ps.epsilon = epsilon;
    ps.delta = delta;
    ps.m_index = m_idx;
    ps.base_level = epsilon * static_cast<double>(m_idx);

    const int n = v.size();
    const double h = v.grid.h();
    int k = 0;
    for (long i = m_idx; i <= n_idx; ++i) {
        const double level = epsilon * static_cast<double>(i);
        while (k < n && v.values[k] < level) ++k;
        if (k == 0 || k == n)
            throw std::invalid_argument("level_points: level not bracketed by the grid");
        const double v0 = v.values[k - 1], v1 = v.values[k];
        ps.positions.push_back(v.grid.x(k - 1) + h * (level - v0) / (v1 - v0));
    }
    for (std::size_t i = 1; i < ps.positions.size(); ++i)
        if (!(ps.positions[i] > ps.positions[i - 1]))
            throw std::runtime_error("level_points: positions not strictly increasing");
    return ps;
}

ValidationReport spacing_bounds_check(const ParticleSystem& ps, double L, double a,
                                      const Interval& window) {
    if (!(L > 0.0) || !(a > 0.0) || a > L)
        throw std::invalid_argument("spacing_bounds_check: need 0 < a <= L");
    ValidationReport rep;
    const double eps = ps.epsilon;

    double min_gap = std::numeric_limits<double>::infinity();
    double max_gap = 0.0;
    for (std::size_t i = 0; i + 1 < ps.positions.size(); ++i) {
        if (!window.contains(ps.positions[i]) || !window.contains(ps.positions[i + 1])) continue;
        const double gap = ps.positions[i + 1] - ps.positions[i];
        min_gap = std::min(min_gap, gap);
        max_gap = std::max(max_gap, gap);
    }
    const bool any = std::isfinite(min_gap);
    // small relative slack for the level-interpolation error
    rep.add("gap-lower-eps-over-L", any ? min_gap : 0.0, eps / L,
            any && min_gap >= (eps / L) * (1.0 - 1e-4));
    rep.add("gap-upper-eps-over-a", any ? max_gap : 0.0, eps / a,
            any && max_gap <= (eps / a) * (1.0 + 1e-4));

    // sum_{i != i0} eps^2/(x_i - xbar)^2 <= (4 pi^2/3) L^2 at random probes
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(window.lo, window.hi);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double xbar = u(rng);
        const std::size_t i0 = nearest_particle_index(ps.positions, xbar);
        double acc = 0.0;
        for (std::size_t i = 0; i < ps.positions.size(); ++i) {
            if (i == i0) continue;
            const double d = ps.positions[i] - xbar;
            acc += eps * eps / (d * d);
        }
        worst = std::max(worst, acc);
    }
    rep.check_leq("interaction-sum-bound", worst, (4.0 * kPi * kPi / 3.0) * L * L);
    return rep;
}

ScalarField reconstruct(const ParticleSystem& ps, const LayerProfile& layer, const Grid1D& grid) {
    if (ps.positions.empty()) throw std::invalid_argument("reconstruct: empty particle system");
    const double eps = ps.epsilon;
    const double width = ps.epsilon * ps.delta;
    std::vector<double> out(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        double acc = ps.base_level;
        for (double xi : ps.positions) acc += eps * layer.value((x - xi) / width);
        out[j] = acc;
    }
    const double top = ps.base_level + eps * static_cast<double>(ps.count());
    return make_field(grid, std::move(out), ps.base_level, top, 1.0);
}

std::vector<double> ddd_rhs(std::span<const double> positions, double c0) {
    const std::size_t n = positions.size();
    if (n == 0) throw std::invalid_argument("ddd_rhs: empty system");
    for (std::size_t i = 1; i < n; ++i)
        if (!(positions[i] > positions[i - 1]))
            throw std::invalid_argument("ddd_rhs: positions must be strictly increasing");
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            acc += 1.0 / (positions[i] - positions[j]);
        }
        v[i] = c0 * acc / kPi;
    }
    return v;
}

DddTrajectory ddd_integrate(std::vector<double> positions0, double c0, double dt, double T,
                            std::span<const double> sample_times) {
    const std::size_t n = positions0.size();
    if (n == 0) throw std::invalid_argument("ddd_integrate: empty system");
    if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("ddd_integrate: need dt > 0, T >= 0");
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) min_gap = std::min(min_gap, positions0[i] - positions0[i - 1]);
    if (n > 1) {
        const double bound = 0.1 * min_gap * min_gap * kPi / c0;
        if (dt > bound * (1.0 + 1e-12))
            throw std::invalid_argument("ddd_integrate: dt violates the repulsion CFL bound " +
                                        std::to_string(bound));
    }

    std::vector<double> targets;
    if (sample_times.empty()) {
        const long total = std::max(1L, static_cast<long>(std::ceil(T / dt)));
        const long stride = std::max(1L, total / 2000);
        for (long s = stride; s < total; s += stride) targets.push_back(std::min(T, s * dt));
        targets.push_back(T);
    } else {
        targets.assign(sample_times.begin(), sample_times.end());
        std::sort(targets.begin(), targets.end());
        if (!targets.empty() && (targets.front() < 0.0 || targets.back() > T + 1e-12))
            throw std::invalid_argument("ddd_integrate: sample times outside [0, T]");
        if (targets.empty() || std::abs(targets.back() - T) > 1e-12) targets.push_back(T);
    }

    DddTrajectory tr;
    tr.times.push_back(0.0);
    tr.positions.push_back(positions0);

    auto ordered = [&](const std::vector<double>& y) {
        for (std::size_t i = 1; i < y.size(); ++i)
            if (!(y[i] > y[i - 1])) return false;
        return true;
    };

    std::vector<double> y = std::move(positions0);
    double t = 0.0;
    for (double target : targets) {
        if (target <= t + 1e-15) {
            if (target > 0.0) { tr.times.push_back(target); tr.positions.push_back(y); }
            continue;
        }
        const long m = std::max(1L, static_cast<long>(std::ceil((target - t) / dt - 1e-12)));
        const double step = (target - t) / static_cast<double>(m);
        for (long s = 0; s < m; ++s) {
            const auto k1 = ddd_rhs(y, c0);
            std::vector<double> tmp(n);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * step * k1[i];
            const auto k2 = ddd_rhs(tmp, c0);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * step * k2[i];
            const auto k3 = ddd_rhs(tmp, c0);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * k3[i];
            const auto k4 = ddd_rhs(tmp, c0);
            for (std::size_t i = 0; i < n; ++i)
                y[i] += step * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
            if (!ordered(y))
                throw std::runtime_error("ddd_integrate: ordering violated at t = " +
                                         std::to_string(t + (s + 1) * step));
        }
        t = target;
        tr.times.push_back(t);
        tr.positions.push_back(y);
    }
    return tr;
}

}  // namespace orowan

#include "orowan/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace orowan {

namespace {

// Tail amplitude A with value(x) ~ limit + A/|x|^p at the given edge.
double tail_amplitude(const ScalarField& f, bool right) {
    if (!f.tail_power) return 0.0;
    const double xe = right ? f.grid.x_max() : f.grid.x_min();
    if (std::abs(xe) < 1.0) return 0.0;  // tail model meaningless near the origin
    const double edge = right ? f.values.back() : f.values.front();
    const double limit = right ? f.right_limit : f.left_limit;
    return (edge - limit) * std::pow(std::abs(xe), *f.tail_power);
}

}  // namespace

double field_extension(const ScalarField& f, double x) {
    if (!f.has_limits()) throw std::invalid_argument("field_extension: far-field limits missing");
    const bool right = x > f.grid.center;
    const double limit = right ? f.right_limit : f.left_limit;
    if (!f.tail_power || std::abs(x) < 1.0) return limit;
    return limit + tail_amplitude(f, right) / std::pow(std::abs(x), *f.tail_power);
}

double field_value(const ScalarField& f, double x) {
    const Grid1D& g = f.grid;
    if (x < g.x_min() || x > g.x_max()) return field_extension(f, x);
    const double h = g.h();
    int k = static_cast<int>(std::floor((x - g.x_min()) / h));
    k = std::clamp(k, 0, g.n - 2);
    const double t = (x - g.x(k)) / h;
    auto at = [&](int i) -> double {
        if (i < 0) return field_extension(f, g.x_min() - h);
        if (i >= g.n) return field_extension(f, g.x_max() + h);
        return f.values[i];
    };
    const double p0 = at(k - 1), p1 = at(k), p2 = at(k + 1), p3 = at(k + 2);
    // uniform Catmull-Rom
    return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                          t * (3.0 * (p1 - p2) + p3 - p0)));
}

double trapezoid_integral(const ScalarField& f) {
    const int n = f.size();
    const double h = f.grid.h();
    if (!f.has_limits()) throw std::invalid_argument("trapezoid_integral: limits missing");
    const double scale = [&] {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }();
    if (std::abs(f.left_limit) > 1e-14 * std::max(1.0, scale) ||
        std::abs(f.right_limit) > 1e-14 * std::max(1.0, scale))
        throw std::invalid_argument("trapezoid_integral: nonzero far-field limit, integral diverges");

    double acc = 0.5 * (f.values.front() + f.values.back());
    for (int i = 1; i < n - 1; ++i) acc += f.values[i];
    double integral = acc * h;

    // analytic algebraic-tail remainder: int_X^inf A/y^p dy = edge * X/(p-1)
    auto tail = [&](bool right) -> double {
        const double edge = right ? f.values.back() : f.values.front();
        const double xe = std::abs(right ? f.grid.x_max() : f.grid.x_min());
        if (std::abs(edge) <= 1e-14 * std::max(1.0, scale)) return 0.0;  // compact support
        if (!f.tail_power || *f.tail_power <= 1.0)
            throw std::invalid_argument("trapezoid_integral: tail decays too slowly, integral diverges");
        if (xe < 1.0) return 0.0;
        return edge * xe / (*f.tail_power - 1.0);
    };
    integral += tail(false) + tail(true);
    return integral;
}

ScalarField cumulative_integral(const ScalarField& f, double base) {
    const int n = f.size();
    const double h = f.grid.h();
    std::vector<double> g(n);
    g[0] = base;
    for (int i = 1; i < n; ++i) g[i] = g[i - 1] + 0.5 * h * (f.values[i - 1] + f.values[i]);
    return make_field(f.grid, std::move(g), base, g.back());
}

ScalarField central_derivative(const ScalarField& f) {
    const int n = f.size();
    const double h = f.grid.h();
    std::vector<double> d(n);
    for (int i = 1; i < n - 1; ++i) d[i] = (f.values[i + 1] - f.values[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * f.values[0] + 4.0 * f.values[1] - f.values[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f.values[n - 1] - 4.0 * f.values[n - 2] + f.values[n - 3]) / (2.0 * h);
    std::optional<double> tp;
    if (f.tail_power) tp = *f.tail_power + 1.0;
    return make_field(f.grid, std::move(d), 0.0, 0.0, tp);
}

double sup_distance(const ScalarField& a, const ScalarField& b, const Interval& window) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("sup_distance: grid mismatch");
    double m = -1.0;
    for (int i = 0; i < a.size(); ++i) {
        const double x = a.x(i);
        if (!window.contains(x)) continue;
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    }
    if (m < 0.0) throw std::invalid_argument("sup_distance: window contains no grid nodes");
    return m;
}

bool is_non_decreasing(const ScalarField& f, double tol) {
    for (int i = 1; i < f.size(); ++i)
        if (f.values[i] - f.values[i - 1] < -tol) return false;
    return true;
}

ScalarField shift_field(const ScalarField& f, double dx) {
    std::vector<double> v(f.size());
    for (int i = 0; i < f.size(); ++i) v[i] = field_value(f, f.x(i) + dx);
    return make_field(f.grid, std::move(v), f.left_limit, f.right_limit, f.tail_power);
}

}  // namespace orowan

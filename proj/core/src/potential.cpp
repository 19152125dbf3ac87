#include "orowan/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace orowan {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double series_alpha(const std::vector<double>& coeffs) {
    double a = 0.0;
    for (std::size_t k = 1; k <= coeffs.size(); ++k) {
        const double w = two_pi * static_cast<double>(k);
        a += coeffs[k - 1] * w * w;
    }
    return a;
}
}  // namespace

PotentialSpec make_classical_potential(double d) {
    if (!(d > 0.0)) throw std::invalid_argument("make_classical_potential: d must be positive");
    PotentialSpec p;
    p.kind = PotentialKind::Classical;
    p.d = d;
    p.coeffs = {1.0 / (2.0 * std::numbers::pi * std::numbers::pi * d)};
    p.alpha = series_alpha(p.coeffs);  // = 2/d
    return p;
}

PotentialSpec make_cosine_potential(std::vector<double> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("make_cosine_potential: empty coefficient list");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("make_cosine_potential: non-finite coefficient");
    PotentialSpec p;
    p.kind = PotentialKind::CosineSeries;
    p.coeffs = std::move(coeffs);
    p.alpha = series_alpha(p.coeffs);
    return p;
}

double eval_potential(const PotentialSpec& p, double u, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("eval_potential: order must be 0, 1 or 2");
    double acc = 0.0;
    for (std::size_t k = 1; k <= p.coeffs.size(); ++k) {
        const double w = two_pi * static_cast<double>(k);
        const double a = p.coeffs[k - 1];
        switch (order) {
            case 0: acc += a * (1.0 - std::cos(w * u)); break;
            case 1: acc += a * w * std::sin(w * u); break;
            case 2: acc += a * w * w * std::cos(w * u); break;
        }
    }
    return acc;
}

double max_second_derivative(const PotentialSpec& p) {
    double m = 0.0;
    for (std::size_t k = 1; k <= p.coeffs.size(); ++k) {
        const double w = two_pi * static_cast<double>(k);
        m += std::abs(p.coeffs[k - 1]) * w * w;
    }
    return m;
}

ValidationReport validate_potential(const PotentialSpec& p, int n_samples) {
    if (n_samples < 16) throw std::invalid_argument("validate_potential: need n_samples >= 16");
    ValidationReport rep;

    rep.add("smoothness-finite-cosine-series", static_cast<double>(p.coeffs.size()), 0.0,
            !p.coeffs.empty());

    double worst_period = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double u = static_cast<double>(i) / n_samples;
        worst_period = std::max(worst_period,
                                std::abs(eval_potential(p, u + 1.0, 0) - eval_potential(p, u, 0)));
    }
    rep.check_leq("period-1", worst_period, 1e-12);

    const double worst_zero = std::max({std::abs(eval_potential(p, -1.0, 0)),
                                        std::abs(eval_potential(p, 0.0, 0)),
                                        std::abs(eval_potential(p, 1.0, 0))});
    rep.check_leq("zero-on-integers", worst_zero, 1e-12);

    double min_interior = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n_samples; ++i) {
        const double u = static_cast<double>(i) / n_samples;
        min_interior = std::min(min_interior, eval_potential(p, u, 0));
    }
    rep.check_gt("positive-between-integers", min_interior, 0.0);

    rep.check_gt("nondegenerate-minimum", p.alpha, 0.0);
    return rep;
}

}  // namespace orowan

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "orowan/micro.hpp"
#include "orowan/numerics.hpp"

using namespace orowan;
namespace {
constexpr double pi = std::numbers::pi;

double crossing(const ScalarField& f, double level) {
    const double h = f.grid.h();
    for (int j = 1; j < f.size(); ++j)
        if (f.values[j] >= level)
            return f.grid.x(j - 1) +
                   h * (level - f.values[j - 1]) / (f.values[j] - f.values[j - 1]);
    FAIL("level not bracketed");
    return 0.0;
}
}  // namespace

TEST_CASE("initialization guards") {
    Grid1D g(0.0, 20.0, 512);
    ScalarField up = sample_field(g, [](double x) { return std::tanh(x); }, -1.0, 1.0);
    ScalarField down = sample_field(g, [](double x) { return -std::tanh(x); }, 1.0, -1.0);
    CHECK_NOTHROW(micro_init(up, 0.1, 0.1));
    CHECK_THROWS_AS(micro_init(down, 0.1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(micro_init(up, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(micro_init(up, 0.1, -1.0), std::invalid_argument);
}

TEST_CASE("integer multiples of eps are stationary") {
    PotentialSpec p = make_classical_potential(1.0);
    Grid1D g(0.0, 20.0, 2048);
    const double eps = 0.25, delta = 0.25, k = 3.0;
    ScalarField u0 = sample_field(g, [&](double) { return eps * k; }, eps * k, eps * k);
    MicroState s = micro_init(u0, eps, delta);
    const double dt = std::min(micro_dt_stiff(s, p), micro_dt_transport(s));
    MicroState s1 = micro_step(s, p, dt);
    for (int j = 0; j < g.n; ++j)
        CHECK(std::abs(s1.u.values[j] - eps * k) <= 1e-14);
}

TEST_CASE("CFL violations are rejected") {
    PotentialSpec p = make_classical_potential(1.0);
    Grid1D g(0.0, 20.0, 512);
    ScalarField u0 = sample_field(g, [](double) { return 0.5; }, 0.5, 0.5);
    MicroState s = micro_init(u0, 0.1, 0.1);
    const double bound = std::min(micro_dt_stiff(s, p), micro_dt_transport(s));
    CHECK_THROWS_AS(micro_step(s, p, 2.0 * bound), std::invalid_argument);
}

TEST_CASE("a single rescaled layer is a steady state") {
    PotentialSpec p = make_classical_potential(1.0);
    Grid1D g(0.0, 20.0, 4096);
    const double eps = 0.25, delta = 0.25, w = eps * delta;
    ScalarField u0 = sample_field(
        g, [&](double x) { return eps * nabarro_closed_form(1.0, x / w); }, 0.0, eps, 1.0);
    MicroState s = micro_init(u0, eps, delta);
    MicroRunResult run = micro_run(s, p, 1.0, {});
    const double drift = std::abs(crossing(run.final_state.u, 0.5 * eps) - crossing(u0, 0.5 * eps));
    CHECK(drift <= 1e-3);  // per unit time (T = 1)
    CHECK(is_non_decreasing(run.final_state.u, 1e-10));
}

TEST_CASE("two-layer run keeps monotonicity and comparison brackets") {
    PotentialSpec p = make_classical_potential(1.0);
    LayerProfile layer = solve_layer_profile(p, Grid1D(0.0, 40.0, 2048));
    const double eps = 0.1, delta = 0.1, w = eps * delta;
    Grid1D g(0.0, 20.0, 4096);
    const double x1 = -0.25, x2 = 0.25;
    ScalarField u0 = sample_field(
        g, [&](double x) { return eps * (layer.value((x - x1) / w) + layer.value((x - x2) / w)); },
        0.0, 2.0 * eps, 1.0);
    MicroState s = micro_init(u0, eps, delta);
    std::vector<double> snaps{0.1, 0.25, 0.4};
    MicroRunResult run = micro_run(s, p, 0.5, snaps);
    for (const MicroState& snap : run.snapshots) CHECK(is_non_decreasing(snap.u, 1e-9));

    // comparison brackets: 0 <= u <= 2 eps throughout
    for (double val : run.final_state.u.values) {
        CHECK(val >= -1e-12);
        CHECK(val <= 2.0 * eps + 1e-12);
    }
}

TEST_CASE("ordered two-layer data repel like the particle system") {
    // resolved cores (h ~ eps*delta/10) so the fronts are free to move
    PotentialSpec p = make_classical_potential(1.0);
    LayerProfile layer = solve_layer_profile(p, Grid1D(0.0, 40.0, 2048));
    const double eps = 0.2, delta = 0.2, w = eps * delta;
    Grid1D g(0.0, 4.0, 2048);
    const double x1 = -0.25, x2 = 0.25;
    ScalarField u0 = sample_field(
        g, [&](double x) { return eps * (layer.value((x - x1) / w) + layer.value((x - x2) / w)); },
        0.0, 2.0 * eps, 1.0);
    MicroState s = micro_init(u0, eps, delta);
    std::vector<double> snaps{0.1, 0.25, 0.4};
    MicroRunResult run = micro_run(s, p, 0.5, snaps);

    // separation grows (repulsion), matching the sign of the ODE velocities
    auto sep = [&](const ScalarField& u) {
        return crossing(u, 1.5 * eps) - crossing(u, 0.5 * eps);
    };
    double prev = sep(u0);
    for (const MicroState& snap : run.snapshots) {
        CHECK(sep(snap.u) > prev);
        prev = sep(snap.u);
    }
    auto v = ddd_rhs(std::vector<double>{x1 / eps, x2 / eps}, layer.c0);
    CHECK(v[0] < 0.0);
    CHECK(v[1] > 0.0);
}

TEST_CASE("zero-horizon run returns the initial state") {
    PotentialSpec p = make_classical_potential(1.0);
    Grid1D g(0.0, 20.0, 512);
    ScalarField u0 = sample_field(g, [](double x) { return 0.5 * (1.0 + std::tanh(x)); }, 0.0, 1.0);
    MicroState s = micro_init(u0, 0.2, 0.2);
    MicroRunResult run = micro_run(s, p, 0.0, {});
    CHECK(run.steps == 0);
    for (int j = 0; j < g.n; ++j) CHECK(run.final_state.u.values[j] == u0.values[j]);
}

TEST_CASE("constant states stay constant over a run") {
    PotentialSpec p = make_classical_potential(1.0);
    Grid1D g(0.0, 20.0, 512);
    const double eps = 0.2, level = 3.0 * eps;
    ScalarField u0 = sample_field(g, [&](double) { return level; }, level, level);
    MicroState s = micro_init(u0, eps, 0.2);
    MicroRunResult run = micro_run(s, p, 0.05, {});
    for (double v : run.final_state.u.values) CHECK(v == doctest::Approx(level).epsilon(1e-12));
}

TEST_CASE("snapshots are delivered at the requested times") {
    PotentialSpec p = make_classical_potential(1.0);
    Grid1D g(0.0, 20.0, 512);
    ScalarField u0 = sample_field(g, [](double x) { return 0.5 * (1.0 + std::tanh(x)); }, 0.0, 1.0);
    MicroState s = micro_init(u0, 0.25, 0.25);
    std::vector<double> snaps{0.01, 0.02};
    MicroRunResult run = micro_run(s, p, 0.03, snaps);
    REQUIRE(run.snapshots.size() == 2);
    CHECK(run.snapshots[0].t == doctest::Approx(0.01));
    CHECK(run.snapshots[1].t == doctest::Approx(0.02));
    CHECK(run.final_state.t == doctest::Approx(0.03));
    CHECK_THROWS_AS(micro_run(s, p, 0.03, std::vector<double>{0.05}), std::invalid_argument);
}

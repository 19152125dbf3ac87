#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "orowan/macro.hpp"
#include "orowan/numerics.hpp"

using namespace orowan;
namespace {
constexpr double pi = std::numbers::pi;
const Grid1D kGrid(0.0, 40.0, 2048);

ScalarField logistic_u0() {
    return sample_field(kGrid, [](double x) { return 0.5 * (1.0 + std::tanh(x)); }, 0.0, 1.0);
}
}  // namespace

TEST_CASE("initialization") {
    MacroState s = macro_init(logistic_u0(), pi);
    CHECK(s.c0 == pi);
    CHECK(s.mass() == doctest::Approx(1.0).epsilon(1e-6));
    for (double v : s.f.values) CHECK(v >= 0.0);
    CHECK(is_non_decreasing(s.u));
    CHECK_THROWS_AS(macro_init(logistic_u0(), 0.0), std::invalid_argument);
    ScalarField down = sample_field(kGrid, [](double x) { return -std::tanh(x); }, 1.0, -1.0);
    CHECK_THROWS_AS(macro_init(down, pi), std::invalid_argument);
}

TEST_CASE("zero density stays put") {
    ScalarField u0 = sample_field(kGrid, [](double) { return 0.25; }, 0.25, 0.25);
    MacroState s = macro_init(u0, pi);
    MacroState s1 = macro_step(s, 1e-3);
    for (double v : s1.f.values) CHECK(v == 0.0);
    for (double v : s1.u.values) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("CFL guard and negative densities") {
    MacroState s = macro_init(logistic_u0(), pi);
    const double bound = macro_dt_bound(s);
    CHECK_THROWS_AS(macro_step(s, 3.0 * bound), std::invalid_argument);
    MacroState bad = s;
    bad.f.values[100] = -0.1;
    CHECK_THROWS_AS(macro_step(bad, 1e-4), std::invalid_argument);
}

TEST_CASE("symmetric bump keeps its center and spreads") {
    MacroState s = macro_init(logistic_u0(), pi);
    MacroRunResult run = macro_run(s, 1.0, {});
    auto center = [&](const ScalarField& f) {
        double num = 0.0, den = 0.0;
        for (int j = 0; j < f.size(); ++j) {
            num += f.x(j) * f.values[j];
            den += f.values[j];
        }
        return num / den;
    };
    CHECK(std::abs(center(run.final_state.f) - center(s.f)) <= 1e-10);
    auto peak = [](const ScalarField& f) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, v);
        return m;
    };
    CHECK(peak(run.final_state.f) < peak(s.f));
}

TEST_CASE("mass is conserved to the gate tolerance over T = 1") {
    MacroState s = macro_init(logistic_u0(), pi);
    MacroRunResult run = macro_run(s, 1.0, {});
    CHECK(run.mass_drift <= 1e-3);
    CHECK(run.steps > 0);
    CHECK(run.dt_used > 0.0);
    CHECK(run.dt_used <= run.cfl_bound);
}

TEST_CASE("density stays nonnegative and u monotone at every snapshot") {
    MacroState s = macro_init(logistic_u0(), pi);
    std::vector<double> snaps{0.2, 0.4, 0.6, 0.8};
    MacroRunResult run = macro_run(s, 1.0, snaps);
    REQUIRE(run.snapshots.size() == 4);
    for (const MacroState& snap : run.snapshots) {
        for (double v : snap.f.values) CHECK(v >= 0.0);
        CHECK(is_non_decreasing(snap.u, 1e-12));
    }
}

TEST_CASE("edge limits track inf and sup of the initial datum") {
    MacroState s = macro_init(logistic_u0(), pi);
    MacroRunResult run = macro_run(s, 1.0, {});
    CHECK(std::abs(run.final_state.u.values.front() - 0.0) <= 1e-3);
    CHECK(std::abs(run.final_state.u.values.back() - 1.0) <= 1e-3);
}

TEST_CASE("u is the cumulative integral of f at all times") {
    MacroState s = macro_init(logistic_u0(), pi);
    MacroRunResult run = macro_run(s, 0.5, {});
    const ScalarField rebuilt = cumulative_integral(run.final_state.f, 0.0);
    for (int j = 0; j < kGrid.n; j += 31)
        CHECK(std::abs(run.final_state.u.values[j] - rebuilt.values[j]) <= 1e-12);
}

TEST_CASE("zero-horizon run returns the initial state") {
    MacroState s = macro_init(logistic_u0(), pi);
    MacroRunResult run = macro_run(s, 0.0, {});
    CHECK(run.steps == 0);
    CHECK(run.mass_drift == 0.0);
}

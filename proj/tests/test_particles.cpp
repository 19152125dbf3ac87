#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "orowan/numerics.hpp"
#include "orowan/particles.hpp"

using namespace orowan;
namespace {
constexpr double pi = std::numbers::pi;
const Grid1D kGrid(0.0, 10.0, 16384);

ScalarField logistic_field() {
    return sample_field(kGrid, [](double x) { return 0.5 * (1.0 + std::tanh(x)); }, 0.0, 1.0);
}

double crossing(const ScalarField& f, double level) {
    const double h = f.grid.h();
    for (int j = 1; j < f.size(); ++j) {
        if (f.values[j] >= level) {
            double x = f.grid.x(j - 1) +
                       h * (level - f.values[j - 1]) / (f.values[j] - f.values[j - 1]);
            for (int it = 0; it < 3; ++it) {
                const double dv =
                    (field_value(f, x + 0.25 * h) - field_value(f, x - 0.25 * h)) / (0.5 * h);
                if (dv <= 0.0) break;
                x -= (field_value(f, x) - level) / dv;
            }
            return x;
        }
    }
    FAIL("level not bracketed");
    return 0.0;
}
}  // namespace

TEST_CASE("level points of the logistic profile") {
    ScalarField v = logistic_field();
    SUBCASE("eps = 1/2: a single particle at the center") {
        ParticleSystem ps = level_points(v, 0.5, 0.5);
        CHECK(ps.m_index == 1);
        CHECK(ps.n_index() == 1);
        REQUIRE(ps.count() == 1);
        CHECK(std::abs(ps.positions[0]) < 1e-9);
        CHECK(ps.base_level == doctest::Approx(0.5));
    }
    SUBCASE("eps = 1/4: the artanh ladder") {
        ParticleSystem ps = level_points(v, 0.25, 0.25);
        REQUIRE(ps.count() == 3);
        CHECK(ps.m_index == 1);
        CHECK(std::abs(ps.positions[0] + std::atanh(0.5)) <= 1e-5);
        CHECK(std::abs(ps.positions[1]) < 1e-9);
        CHECK(std::abs((ps.positions[2]) - (std::atanh(0.5))) <= (1e-5));
    }
    SUBCASE("levels are hit by the linear interpolant") {
        ParticleSystem ps = level_points(v, 0.05, 0.05);
        const double h = kGrid.h();
        for (long i = ps.m_index; i <= ps.n_index(); ++i) {
            const double x = ps.positions[i - ps.m_index];
            const int k = static_cast<int>(std::floor((x - kGrid.x_min()) / h));
            const double t = (x - kGrid.x(k)) / h;
            const double lin = (1.0 - t) * v.values[k] + t * v.values[k + 1];
            CHECK(std::abs(lin - 0.05 * static_cast<double>(i)) <= 1e-10);
        }
        for (std::size_t i = 1; i < ps.count(); ++i)
            CHECK(ps.positions[i] > ps.positions[i - 1]);
    }
    SUBCASE("degenerate inputs are rejected") {
        ScalarField flat = sample_field(kGrid, [](double) { return 0.3; }, 0.3, 0.3);
        CHECK_THROWS_AS(level_points(flat, 0.1, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(level_points(v, 0.75, 0.75), std::invalid_argument);
        CHECK_THROWS_AS(level_points(v, -0.1, 0.1), std::invalid_argument);
        ScalarField down = sample_field(kGrid, [](double x) { return -std::tanh(x); }, 1.0, -1.0);
        CHECK_THROWS_AS(level_points(down, 0.25, 0.25), std::invalid_argument);
    }
}

TEST_CASE("spacing bounds") {
    ScalarField v = logistic_field();
    ParticleSystem ps = level_points(v, 0.05, 0.05);
    SUBCASE("logistic gaps sit inside [eps/L, eps/a] on a central window") {
        // v' on [-1, 1] ranges between sech(1)^2/2 and 1/2
        const double L = 0.5;
        const double a = 0.5 / std::cosh(1.0) / std::cosh(1.0);
        ValidationReport rep = spacing_bounds_check(ps, L, a, {-1.0, 1.0});
        CHECK(rep.all_pass());
    }
    SUBCASE("artificially merged particles fail") {
        ParticleSystem bad = ps;
        bad.positions[5] = bad.positions[4] + 1e-9;
        ValidationReport rep = spacing_bounds_check(bad, 0.5, 0.1, {-1.0, 1.0});
        CHECK_FALSE(rep.all_pass());
    }
    SUBCASE("argument order is validated") {
        CHECK_THROWS_AS(spacing_bounds_check(ps, 0.1, 0.5, {-1.0, 1.0}), std::invalid_argument);
    }
}

TEST_CASE("reconstruction") {
    ScalarField v = logistic_field();
    PotentialSpec p = make_classical_potential(1.0);
    LayerProfile layer = solve_layer_profile(p, Grid1D(0.0, 40.0, 2048));

    SUBCASE("a single particle reconstructs one scaled layer") {
        ParticleSystem ps;
        ps.epsilon = 1.0;
        ps.delta = 0.5;
        ps.positions = {0.0};
        ps.m_index = 1;
        ps.base_level = 1.0;
        ScalarField rec = reconstruct(ps, layer, kGrid);
        for (int j = 0; j < kGrid.n; j += 97) {
            const double expect = 1.0 + layer.value(kGrid.x(j) / 0.5);
            CHECK(std::abs((rec.values[j]) - (expect)) <= (1e-12));
        }
    }
    SUBCASE("sup error decreases when eps and delta halve together") {
        double prev = 1e9;
        for (double e : {0.1, 0.05, 0.025}) {
            ParticleSystem ps = level_points(v, e, e);
            ScalarField rec = reconstruct(ps, layer, kGrid);
            double err = 0.0;
            for (int j = 0; j < kGrid.n; ++j)
                err = std::max(err, std::abs(rec.values[j] - v.values[j]));
            CHECK(err < prev);
            prev = err;
        }
    }
    SUBCASE("far left of all particles the value approaches the base level") {
        ParticleSystem ps = level_points(v, 0.1, 0.1);
        ScalarField rec = reconstruct(ps, layer, kGrid);
        const double R = std::abs(kGrid.x_min() - ps.positions.front());
        // |value - base| <= eps (sup v - inf v + eps) delta/(alpha pi R) + K1 eps delta^2 / R-ish
        const double bound = ps.epsilon * (1.0 + ps.epsilon) * ps.delta /
                                 (layer.alpha * pi * R) +
                             10.0 * ps.epsilon * ps.delta * ps.delta / R;
        CHECK(std::abs(rec.values.front() - ps.base_level) <= bound * 2.0);
    }
    SUBCASE("half-levels of the reconstruction sit on the source particles") {
        for (double e : {0.05, 0.025}) {
            ParticleSystem ps = level_points(v, e, e);
            ScalarField rec = reconstruct(ps, layer, kGrid);
            double dev = 0.0;
            for (long i = ps.m_index; i <= ps.n_index(); ++i) {
                const double level = e * static_cast<double>(i);
                if (level < 0.2 || level > 0.8) continue;
                dev = std::max(dev, std::abs(crossing(rec, level + 0.5 * e) -
                                             ps.positions[i - ps.m_index]));
            }
            CHECK(dev <= e * e);  // within eps*delta in the bulk
        }
    }
    SUBCASE("uniform in x: grid max and fine-probe max within 2x") {
        ParticleSystem ps = level_points(v, 0.05, 0.05);
        ScalarField rec = reconstruct(ps, layer, kGrid);
        double err_grid = 0.0;
        for (int j = 0; j < kGrid.n; ++j)
            err_grid = std::max(err_grid, std::abs(rec.values[j] - v.values[j]));
        const double w = ps.epsilon * ps.delta;
        double err_fine = err_grid;
        for (int j = 0; j < kGrid.n - 1; ++j) {
            for (int k = 1; k < 10; k += 3) {
                const double x = kGrid.x(j) + k * kGrid.h() / 10.0;
                double acc = ps.base_level;
                for (double xi : ps.positions) acc += ps.epsilon * layer.value((x - xi) / w);
                err_fine = std::max(err_fine, std::abs(acc - field_value(v, x)));
            }
        }
        CHECK(err_fine / err_grid <= 2.0);
    }
}

TEST_CASE("discrete dislocation dynamics") {
    SUBCASE("pairwise velocities") {
        const double c0 = pi, s = 0.8;
        auto v = ddd_rhs(std::vector<double>{-0.5 * s, 0.5 * s}, c0);
        CHECK(v[0] == doctest::Approx(-c0 / (pi * s)).epsilon(1e-14));
        CHECK(v[1] == doctest::Approx(c0 / (pi * s)).epsilon(1e-14));
    }
    SUBCASE("symmetric triple") {
        const double c0 = 2.0, a = 1.3;
        auto v = ddd_rhs(std::vector<double>{-a, 0.0, a}, c0);
        CHECK(v[1] == 0.0);
        CHECK(v[2] == doctest::Approx(3.0 * c0 / (2.0 * pi * a)).epsilon(1e-14));
        CHECK(v[0] == doctest::Approx(-3.0 * c0 / (2.0 * pi * a)).epsilon(1e-14));
    }
    SUBCASE("coincident positions are rejected") {
        CHECK_THROWS_AS(ddd_rhs(std::vector<double>{0.0, 0.0, 1.0}, 1.0), std::invalid_argument);
    }
    SUBCASE("two-body closed form at t = 1") {
        DddTrajectory tr = ddd_integrate({-0.5, 0.5}, pi, 1e-3, 1.0);
        const double sep = tr.positions.back()[1] - tr.positions.back()[0];
        CHECK(std::abs(sep - std::sqrt(5.0)) / std::sqrt(5.0) <= 1e-6);
    }
    SUBCASE("center of mass is conserved") {
        DddTrajectory tr = ddd_integrate({-1.0, -0.3, 0.5, 1.4}, 2.0, 5e-4, 0.5);
        const double com0 = -1.0 - 0.3 + 0.5 + 1.4;
        for (const auto& row : tr.positions) {
            double com = 0.0;
            for (double y : row) com += y;
            CHECK(std::abs(com - com0) <= 1e-10);
        }
    }
    SUBCASE("a single particle is stationary") {
        DddTrajectory tr = ddd_integrate({0.7}, 3.0, 1e-2, 2.0);
        for (const auto& row : tr.positions) CHECK(row[0] == 0.7);
    }
    SUBCASE("ordering is preserved along the trajectory") {
        DddTrajectory tr = ddd_integrate({-0.2, -0.1, 0.3}, 1.0, 2e-4, 0.5);
        for (const auto& row : tr.positions) {
            CHECK(row[0] < row[1]);
            CHECK(row[1] < row[2]);
        }
    }
    SUBCASE("the repulsion CFL bound is enforced") {
        CHECK_THROWS_AS(ddd_integrate({-0.01, 0.01}, pi, 1e-3, 1.0), std::invalid_argument);
    }
    SUBCASE("requested sample times are honored") {
        std::vector<double> samples{0.25, 0.5, 1.0};
        DddTrajectory tr = ddd_integrate({-0.5, 0.5}, pi, 1e-3, 1.0, samples);
        REQUIRE(tr.times.size() == 4);  // t = 0 plus the requested rows
        CHECK(tr.times[1] == doctest::Approx(0.25));
        CHECK(tr.times[3] == doctest::Approx(1.0));
    }
}

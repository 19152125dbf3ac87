#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "orowan/layer.hpp"
#include "orowan/numerics.hpp"

using namespace orowan;
namespace {
constexpr double pi = std::numbers::pi;
const Grid1D kLayerGrid(0.0, 40.0, 2048);
}  // namespace

TEST_CASE("closed-form layer values") {
    CHECK(nabarro_closed_form(1.0, 0.0) == 0.5);
    CHECK(nabarro_closed_form(2.5, 0.0) == 0.5);
    CHECK(nabarro_closed_form(1.0, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(nabarro_closed_form(1.0, 1e9) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(nabarro_closed_form(1.0, -1e9)) <= 1e-9);
    CHECK_THROWS_AS(nabarro_closed_form(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("solved layer matches the closed form for classical potentials") {
    for (double d : {1.0, 2.0}) {
        LayerProfile layer = solve_layer_profile(make_classical_potential(d), kLayerGrid);
        double worst = 0.0;
        for (int j = 0; j < kLayerGrid.n; ++j) {
            if (std::abs(kLayerGrid.x(j)) > 20.0) continue;
            worst = std::max(worst,
                             std::abs(layer.field.values[j] - nabarro_closed_form(d, kLayerGrid.x(j))));
        }
        CHECK(worst <= 1e-3);
        CHECK(layer.residual <= 1e-6);
        CHECK(std::abs(layer.value(0.0) - 0.5) <= 1e-8);
        CHECK(is_non_decreasing(layer.field));
        // strictly increasing
        for (int j = 1; j < kLayerGrid.n; ++j)
            CHECK(layer.field.values[j] > layer.field.values[j - 1]);
    }
}

TEST_CASE("invalid potentials are rejected before iterating") {
    CHECK_THROWS_AS(solve_layer_profile(make_cosine_potential({-0.01}), kLayerGrid),
                    std::invalid_argument);
    // off-center grids are not layer grids
    CHECK_THROWS_AS(solve_layer_profile(make_classical_potential(1.0), Grid1D(1.0, 40.0, 2048)),
                    std::invalid_argument);
}

TEST_CASE("mobility constant") {
    SUBCASE("classical family: c0 = pi d") {
        for (double d : {0.5, 1.0, 2.0}) {
            LayerProfile layer = solve_layer_profile(make_classical_potential(d), kLayerGrid);
            CHECK(std::abs(layer.c0 - pi * d) / (pi * d) <= 1e-3);
        }
    }
    SUBCASE("doubling the resolution barely moves c0") {
        PotentialSpec p = make_classical_potential(1.0);
        const double a = solve_layer_profile(p, Grid1D(0.0, 40.0, 2048)).c0;
        const double b = solve_layer_profile(p, Grid1D(0.0, 40.0, 4096)).c0;
        CHECK(std::abs(b - a) / a < 1e-4);
    }
}

TEST_CASE("solver handles non-classical cosine series") {
    PotentialSpec p = make_cosine_potential({0.04, 0.01});
    LayerProfile layer = solve_layer_profile(p, kLayerGrid);
    CHECK(layer.residual <= 1e-6);
    CHECK(layer.alpha == doctest::Approx(p.alpha));
    CHECK(verify_layer_tails(layer).all_pass());
    CHECK(layer.c0 > 0.0);
}

TEST_CASE("corrector") {
    PotentialSpec p = make_classical_potential(1.0);
    LayerProfile layer = solve_layer_profile(p, Grid1D(0.0, 30.0, 2048));

    SUBCASE("zero stress gives the zero corrector") {
        CorrectorProfile psi = solve_corrector(p, layer, 0.0);
        for (double v : psi.field.values) CHECK(v == 0.0);
        CHECK(psi.residual == 0.0);
    }
    SUBCASE("unit stress: residual certificate and decay envelope") {
        CorrectorProfile psi = solve_corrector(p, layer, 1.0);
        CHECK(psi.residual <= 1e-6);
        CHECK(psi.K3 > 0.0);
        for (int j = 0; j < psi.field.size(); ++j) {
            const double x = psi.field.x(j);
            if (std::abs(x) < 1.0) continue;
            const double envelope =
                psi.K3 / (1.0 + x * x) + std::abs(psi.K2 / x) + 1e-9;
            CHECK(std::abs(psi.field.values[j]) <= envelope * 1.05);
        }
    }
    SUBCASE("exactly linear in the applied stress") {
        CorrectorProfile one = solve_corrector(p, layer, 1.0);
        CorrectorProfile two = solve_corrector(p, layer, 2.0);
        double worst = 0.0;
        for (int j = 0; j < one.field.size(); ++j)
            worst = std::max(worst, std::abs(two.field.values[j] - 2.0 * one.field.values[j]));
        CHECK(worst <= 1e-8);
        CHECK(two.residual <= 1e-6);
    }
}

TEST_CASE("layer tail checks") {
    SUBCASE("closed form satisfies the asymptote to O(1/x)") {
        // phi(x) - H(x) + 1/(alpha pi x) = O(1/x^3) exactly for the arctan layer
        const double alpha = 2.0;
        double worst = 0.0;
        for (double x = 1.0; x < 40.0; x += 0.25) {
            const double res_r =
                x * x * std::abs(nabarro_closed_form(1.0, x) - 1.0 + 1.0 / (alpha * pi * x));
            const double res_l =
                x * x * std::abs(nabarro_closed_form(1.0, -x) - 1.0 / (alpha * pi * x));
            worst = std::max({worst, res_r, res_l});
        }
        CHECK(worst < 0.1);  // decays like 1/(3 pi 2^3 x) from x = 1
    }
    SUBCASE("solved layer passes, derivative bounds positive and finite") {
        LayerProfile layer = solve_layer_profile(make_classical_potential(1.0), kLayerGrid);
        ValidationReport rep = verify_layer_tails(layer);
        CHECK(rep.all_pass());
        CHECK(layer.tail_constant_K1 > 0.0);
        CHECK(layer.tail_constant_K1 < 1e3);
    }
    SUBCASE("a constant field is not a layer") {
        LayerProfile fake;
        fake.field = sample_field(kLayerGrid, [](double) { return 0.5; }, 0.5, 0.5);
        fake.alpha = 2.0;
        ValidationReport rep = verify_layer_tails(fake);
        CHECK_FALSE(rep.all_pass());
    }
}

TEST_CASE("layer evaluation beyond its grid uses the asymptote") {
    LayerProfile layer = solve_layer_profile(make_classical_potential(1.0), kLayerGrid);
    const double far = 80.0;
    CHECK(layer.value(far) == doctest::Approx(1.0 - 1.0 / (2.0 * pi * far)).epsilon(1e-10));
    CHECK(layer.value(-far) == doctest::Approx(1.0 / (2.0 * pi * far)).epsilon(1e-10));
}

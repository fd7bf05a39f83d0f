#include <catch2/catch.hpp>

#include <cmath>

#include "mixlab/initial_data.hpp"
#include "mixlab/quadrature.hpp"
#include "test_helpers.hpp"

using namespace mixlab;
using Catch::Detail::Approx;

namespace {

Params data_params() {
    Params p = testing::small_params(4.0, 8.0, 64, 513);
    return p;
}

} // namespace

TEST_CASE("constructed sheet satisfies the initial-datum constraints exactly on the grid") {
    const Params p = data_params();
    auto g = make_grid(p);
    InitialDataSpec spec;
    spec.delta = 0.25;
    spec.epsilon = 0.5;
    spec.wavenumber = 2;
    ScalarField w0 = build_initial_vorticity(spec, p, g);

    double mn = 1e300;
    for (double v : w0.values()) mn = std::min(mn, v);
    CHECK(mn >= 0.0);

    Profile wbar = horizontal_average(w0);
    CHECK(profile_integral(wbar) == Approx(p.U).margin(1e-10 * p.U));
    CHECK(std::abs(profile_moment(wbar, 1)) <= 1e-12 * p.U * p.H);

    // support stays strictly inside |z| < 1
    for (int j = 0; j < g->nz(); ++j)
        if (std::abs(g->z(j)) >= spec.delta + g->dz()) CHECK(wbar[j] == 0.0);
}

TEST_CASE("grid quadrature of the analytic formula agrees with the oracle") {
    const Params p = data_params();
    auto g = make_grid(p);
    InitialDataSpec spec;  // defaults delta = 0.25
    // the mollifier mass the grid sees vs the adaptive-quadrature mass
    double grid_mass = 0.0;
    for (int j = 0; j < g->nz(); ++j) grid_mass += g->w(j) * bump(g->z(j) / spec.delta);
    const double oracle_mass =
        adaptive_simpson([&](double z) { return bump(z / spec.delta); },
                         -spec.delta, spec.delta, 1e-14);
    // ~16 nodes across the sheet: a few 1e-4 of relative quadrature error
    CHECK(grid_mass == Approx(oracle_mass).epsilon(1e-3));
}

TEST_CASE("spec invariants are rejected with field-level errors") {
    const Params p = data_params();
    auto g = make_grid(p);
    InitialDataSpec spec;
    SECTION("amplitude breaks positivity") {
        spec.epsilon = 1.2;
        CHECK_THROWS_AS(build_initial_vorticity(spec, p, g), ConfigError);
    }
    SECTION("sheet too wide") {
        spec.delta = 0.6;
        CHECK_THROWS_AS(spec.validate(), ConfigError);
    }
    SECTION("envelope too wide") {
        spec.chi_width = 0.9;
        CHECK_THROWS_AS(spec.validate(), ConfigError);
    }
    SECTION("wavenumber outside the dealiased band") {
        spec.wavenumber = g->ny();
        CHECK_THROWS_AS(build_initial_vorticity(spec, p, g), ConfigError);
    }
    SECTION("wavenumber must be positive") {
        spec.wavenumber = 0;
        CHECK_THROWS_AS(spec.validate(), ConfigError);
    }
}

TEST_CASE("unperturbed sheet is y-independent") {
    const Params p = data_params();
    auto g = make_grid(p);
    InitialDataSpec spec;
    spec.epsilon = 0.0;
    ScalarField w0 = build_initial_vorticity(spec, p, g);
    for (int j = 0; j < g->nz(); ++j)
        for (int i = 1; i < g->ny(); ++i) CHECK(w0.at(i, j) == w0.at(0, j));
}

TEST_CASE("validate_initial_data passes the constructed datum") {
    const Params p = data_params();
    auto g = make_grid(p);
    InitialDataSpec spec;
    ScalarField w0 = build_initial_vorticity(spec, p, g);
    const ValidationReport rep = validate_initial_data(w0, p);
    INFO(rep.describe());
    CHECK(rep.ok());
    CHECK(rep.mass_error <= 1e-12);
    CHECK(rep.first_moment <= 1e-13);
}

TEST_CASE("shifted sheet fails the first-moment check") {
    const Params p = data_params();
    auto g = make_grid(p);
    InitialDataSpec spec;
    spec.epsilon = 0.0;
    const double shift = 10 * g->dz();  // grid-aligned, so the moment is exact
    ScalarField w0(g);
    std::vector<double> phi(g->nz());
    double mass = 0.0;
    for (int j = 0; j < g->nz(); ++j) {
        phi[j] = bump((g->z(j) - shift) / spec.delta);
        mass += g->w(j) * phi[j];
    }
    for (int j = 0; j < g->nz(); ++j)
        for (int i = 0; i < g->ny(); ++i) w0.at(i, j) = p.U * phi[j] / mass;

    const ValidationReport rep = validate_initial_data(w0, p);
    CHECK_FALSE(rep.moment_ok);
    CHECK(rep.first_moment * p.U * p.H / p.U == Approx(shift).epsilon(1e-10));
    CHECK(rep.mass_ok);
}

TEST_CASE("a negative node fails the positivity check") {
    const Params p = data_params();
    auto g = make_grid(p);
    InitialDataSpec spec;
    ScalarField w0 = build_initial_vorticity(spec, p, g);
    w0.at(3, g->nz() / 2) = -0.1 * p.U;
    const ValidationReport rep = validate_initial_data(w0, p);
    CHECK_FALSE(rep.positivity_ok);
}

TEST_CASE("asymmetric constructor recenters the sheet to zero moment") {
    const Params p = data_params();
    auto g = make_grid(p);
    InitialDataSpec spec;
    spec.delta = 0.3;
    ScalarField w0 = build_asymmetric_initial_vorticity(spec, p, g, 0.5);
    Profile wbar = horizontal_average(w0);
    CHECK(profile_integral(wbar) == Approx(p.U).margin(1e-10 * p.U));
    CHECK(std::abs(profile_moment(wbar, 1)) <= 1e-9 * p.U * p.H);
    double mn = 1e300;
    for (double v : w0.values()) mn = std::min(mn, v);
    CHECK(mn >= 0.0);
}

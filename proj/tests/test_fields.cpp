#include <catch2/catch.hpp>

#include <cmath>
#include <numbers>

#include "mixlab/fields.hpp"
#include "mixlab/quadrature.hpp"
#include "test_helpers.hpp"

using namespace mixlab;
using Catch::Detail::Approx;

TEST_CASE("make_grid produces exact spacings and symmetric nodes") {
    Params p;
    p.L = 1.0;
    p.H = 2.0;
    p.Ny = 8;
    p.Nz = 9;
    auto g = make_grid(p);
    CHECK(g->dy() == Approx(0.125).epsilon(0));
    CHECK(g->dz() == Approx(0.5).epsilon(0));
    CHECK(g->z(0) == -2.0);
    CHECK(g->z(4) == 0.0);
    CHECK(g->z(8) == 2.0);
    for (int j = 0; j < g->nz(); ++j) CHECK(g->z(j) == Approx(-g->z(g->nz() - 1 - j)).margin(0));

    Params q;
    q.L = 4.0;
    q.Ny = 64;
    q.Nz = 257;
    q.H = 8.0;
    CHECK(make_grid(q)->dz() == Approx(0.0625).epsilon(0));
}

TEST_CASE("make_grid rejects invalid resolutions and truncation") {
    Params p;
    SECTION("H too small for the initial layer") {
        p.H = 0.5;
        CHECK_THROWS_AS(make_grid(p), ConfigError);
        p.H = 1.0;
        CHECK_THROWS_AS(make_grid(p), ConfigError);
    }
    SECTION("Nz below minimum") {
        p.Nz = 5;
        CHECK_THROWS_AS(make_grid(p), ConfigError);
    }
    SECTION("odd Ny") {
        p.Ny = 33;
        CHECK_THROWS_AS(make_grid(p), ConfigError);
    }
    SECTION("Ny below minimum") {
        p.Ny = 4;
        CHECK_THROWS_AS(make_grid(p), ConfigError);
    }
}

TEST_CASE("horizontal_average on constants, harmonics, products") {
    Params p = testing::small_params(2.0, 3.0, 16, 65);
    auto g = make_grid(p);

    ScalarField c(g, 0.7);
    Profile pc = horizontal_average(c);
    for (int j = 0; j < pc.size(); ++j) CHECK(pc[j] == Approx(0.7).margin(1e-15));

    ScalarField f(g);
    f.fill_with([&](double y, double z) {
        return std::sin(2.0 * std::numbers::pi * y / g->L()) + z;
    });
    Profile pf = horizontal_average(f);
    for (int j = 0; j < pf.size(); ++j) CHECK(pf[j] == Approx(g->z(j)).margin(1e-14));

    ScalarField h(g);
    h.fill_with([&](double y, double z) {
        return std::cos(4.0 * std::numbers::pi * y / g->L()) * std::exp(-z * z);
    });
    Profile ph = horizontal_average(h);
    for (int j = 0; j < ph.size(); ++j) CHECK(ph[j] == Approx(0.0).margin(1e-15));
}

TEST_CASE("horizontal_average is linear and idempotent on y-independent fields") {
    Params p = testing::small_params(1.5, 2.0, 16, 33);
    auto g = make_grid(p);
    ScalarField f = testing::seeded_random_field(g, 11);
    ScalarField h = testing::seeded_random_field(g, 17);
    ScalarField combo(g);
    for (std::size_t i = 0; i < combo.values().size(); ++i)
        combo.values()[i] = 2.5 * f.values()[i] - 0.75 * h.values()[i];
    Profile pf = horizontal_average(f);
    Profile ph = horizontal_average(h);
    Profile pcombo = horizontal_average(combo);
    for (int j = 0; j < pcombo.size(); ++j)
        CHECK(pcombo[j] == Approx(2.5 * pf[j] - 0.75 * ph[j]).margin(1e-13));

    ScalarField yind(g);
    yind.fill_with([](double, double z) { return std::cos(z) + z * z; });
    Profile p1 = horizontal_average(yind);
    for (int j = 0; j < p1.size(); ++j)
        CHECK(p1[j] == Approx(yind.at(0, j)).epsilon(1e-14));
}

TEST_CASE("averaging and z-integration commute") {
    Params p = testing::small_params(2.0, 4.0, 32, 129);
    auto g = make_grid(p);
    ScalarField f = testing::seeded_random_field(g, 23);
    CHECK(normalized_integral(f) == profile_integral(horizontal_average(f)));
}

TEST_CASE("normalized_integral reproduces Gaussian mass and second moment") {
    Params p = testing::small_params(1.0, 8.0, 8, 257);
    auto g = make_grid(p);
    const double sigma = 0.2, U = 1.0;
    auto gauss = [&](double z) {
        return U / std::sqrt(2.0 * std::numbers::pi * sigma * sigma) *
               std::exp(-z * z / (2.0 * sigma * sigma));
    };
    ScalarField f(g);
    f.fill_with([&](double, double z) { return gauss(z); });

    const double mass = normalized_integral(f);
    const double oracle_mass = adaptive_simpson(gauss, -8.0, 8.0, 1e-13);
    CHECK(mass == Approx(1.0).margin(1e-8));
    CHECK(oracle_mass == Approx(1.0).margin(1e-10));
    CHECK(mass == Approx(oracle_mass).margin(1e-8));

    const double m2 = profile_moment(horizontal_average(f), 2);
    const double oracle_m2 =
        adaptive_simpson([&](double z) { return z * z * gauss(z); }, -8.0, 8.0, 1e-13);
    CHECK(m2 == Approx(0.04).margin(1e-8));
    CHECK(oracle_m2 == Approx(0.04).margin(1e-10));
}

TEST_CASE("trapezoid quadrature converges at second order on a C0 integrand") {
    // f = 1 - z^2 on [-1, 1], zero outside: derivative jumps at the (node-
    // aligned) support edge, so the trapezoid error is exactly h^2/3
    auto run_once = [](int nz) {
        Params p = testing::small_params(1.0, 2.0, 8, nz);
        auto g = make_grid(p);
        ScalarField f(g);
        f.fill_with([](double, double z) {
            return std::abs(z) <= 1.0 ? 1.0 - z * z : 0.0;
        });
        return std::abs(normalized_integral(f) - 4.0 / 3.0);
    };
    const double e1 = run_once(129);
    const double e2 = run_once(257);
    CHECK(e1 > 0.0);
    CHECK(e1 / e2 == Approx(4.0).epsilon(0.05));
}

TEST_CASE("boundary decay warning flags truncation contamination") {
    Params p = testing::small_params(1.0, 4.0, 8, 129);
    auto g = make_grid(p);
    ScalarField wide(g);
    wide.fill_with([](double, double z) { return std::exp(-z * z / 18.0); });
    ScalarField narrow(g);
    narrow.fill_with([](double, double z) { return std::exp(-z * z * 8.0); });

    const auto rw = normalized_integral_checked(wide);
    const auto rn = normalized_integral_checked(narrow);
    CHECK(rw.decay_warning(1e-8, 1.0));
    CHECK_FALSE(rn.decay_warning(1e-8, 1.0));
}

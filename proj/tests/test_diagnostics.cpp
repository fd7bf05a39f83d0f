#include <catch2/catch.hpp>

#include <cmath>
#include <numbers>

#include "mixlab/diagnostics.hpp"
#include "mixlab/quadrature.hpp"
#include "test_helpers.hpp"

using namespace mixlab;
using Catch::Detail::Approx;

namespace {

GridPtr grid_1d(double H, int nz, double L = 1.0, int ny = 8) {
    return std::make_shared<Grid>(L, H, ny, nz);
}

// u = ubar(z) e_y as a field pair
void fill_shear(ScalarField& uy, ScalarField& uz, double (*ubar)(double, double), double t) {
    const Grid& g = uy.grid();
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i < g.ny(); ++i) {
            uy.at(i, j) = ubar(g.z(j), t);
            uz.at(i, j) = 0.0;
        }
}

double erf_shear(double z, double t) { return -0.5 * std::erf(z / std::sqrt(4.0 * t)); }

} // namespace

TEST_CASE("mixing center: parity, shift, and the exact zero of valid data") {
    auto g = grid_1d(4.0, 513);
    Profile even(g);
    for (int j = 0; j < g->nz(); ++j) even[j] = std::exp(-g->z(j) * g->z(j));
    const double mass = profile_integral(even);
    CHECK(mixing_center(even, mass) == Approx(0.0).margin(1e-14));

    // grid-aligned shift moves the center by exactly the shift
    const double shift = 38 * g->dz();  // ~0.30
    Profile shifted(g);
    for (int j = 0; j < g->nz(); ++j) {
        const double z = g->z(j) - shift;
        shifted[j] = std::abs(z) < 1.0 ? bump(z / 0.25) : 0.0;
    }
    const double m0 = profile_integral(shifted);
    CHECK(mixing_center(shifted, m0) == Approx(shift).epsilon(1e-12));
}

TEST_CASE("mixing width: rarefaction, Gaussian, and point-mass limits") {
    SECTION("rarefaction vorticity at U=1, t=2 gives l^2 = 1/3") {
        const double t = 2.0;
        auto g = grid_1d(1.0, 2049);  // fan exactly spans the grid
        Profile wbar(g);
        for (int j = 0; j < g->nz(); ++j) wbar[j] = 1.0 / t;
        CHECK(mixing_width(wbar, 1.0) == Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-6));
        CHECK(mixing_width(wbar, 1.0) == Approx(0.577350).epsilon(1e-5));
    }
    SECTION("Gaussian of std sigma has l = sigma") {
        auto g = grid_1d(8.0, 1025);
        const double sigma = 0.5;
        Profile wbar(g);
        for (int j = 0; j < g->nz(); ++j)
            wbar[j] = std::exp(-g->z(j) * g->z(j) / (2.0 * sigma * sigma)) /
                      std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
        CHECK(mixing_width(wbar, profile_integral(wbar)) == Approx(sigma).epsilon(1e-9));
    }
    SECTION("narrow sheets have vanishing width") {
        auto g = grid_1d(4.0, 4097);
        for (double delta : {0.2, 0.1, 0.05}) {
            Profile wbar(g);
            for (int j = 0; j < g->nz(); ++j) wbar[j] = bump(g->z(j) / delta);
            CHECK(mixing_width(wbar, profile_integral(wbar)) < delta);
        }
    }
    SECTION("negative second moment is a data-quality error") {
        auto g = grid_1d(4.0, 65);
        Profile wbar(g, 0.0);
        wbar[3] = -1.0;
        CHECK_THROWS(mixing_width(wbar, 1.0));
    }
}

TEST_CASE("renormalized energy on shear profiles") {
    SECTION("sharp shear has zero renormalized energy") {
        auto g = grid_1d(8.0, 4097);
        ScalarField uy(g), uz(g);
        for (int j = 0; j < g->nz(); ++j)
            for (int i = 0; i < g->ny(); ++i) uy.at(i, j) = reference_shear(g->z(j), 1.0);
        CHECK(renormalized_energy(uy, uz, 1.0) == 0.0);
    }
    SECTION("rarefaction profile gives U^2 t / 12") {
        const double t = 1.5;
        auto g = grid_1d(0.5 * t, 4097);  // integrand vanishes outside the fan
        ScalarField uy(g), uz(g);
        for (int j = 0; j < g->nz(); ++j)
            for (int i = 0; i < g->ny(); ++i)
                uy.at(i, j) = rarefaction_profile(g->z(j), t, 1.0);
        CHECK(renormalized_energy(uy, uz, 1.0) == Approx(t / 12.0).epsilon(1e-6));
    }
    SECTION("diffusive erf shear matches the quadrature oracle") {
        auto g = grid_1d(8.0, 4097);
        ScalarField uy(g), uz(g);
        const double t = 1.0;
        fill_shear(uy, uz, erf_shear, t);
        const double oracle = adaptive_simpson(
            [&](double z) {
                const double u = erf_shear(z, t);
                return 0.25 - u * u;
            },
            -8.0, 8.0, 1e-13) / 2.0;
        CHECK(renormalized_energy(uy, uz, 1.0) == Approx(oracle).margin(1e-6));
        // closed form U sqrt(t) / sqrt(2 pi)
        CHECK(oracle == Approx(std::sqrt(t / (2.0 * std::numbers::pi))).epsilon(1e-7));
    }
}

TEST_CASE("energy separation on shear and solenoidal perturbations") {
    SECTION("unperturbed shear separates by zero") {
        auto g = grid_1d(8.0, 2049, 2.0, 32);
        ScalarField uy(g), uz(g);
        for (int j = 0; j < g->nz(); ++j)
            for (int i = 0; i < g->ny(); ++i) uy.at(i, j) = reference_shear(g->z(j), 1.0);
        CHECK(energy_separation(uy, uz, 1.0) == 0.0);
    }
    SECTION("rarefaction profile gives U^2 t / 24") {
        const double t = 2.0;
        auto g = grid_1d(0.5 * t, 8193);  // integrand vanishes outside the fan
        ScalarField uy(g), uz(g);
        for (int j = 0; j < g->nz(); ++j)
            for (int i = 0; i < g->ny(); ++i)
                uy.at(i, j) = rarefaction_profile(g->z(j), t, 1.0);
        CHECK(energy_separation(uy, uz, 1.0) == Approx(t / 24.0).epsilon(1e-6));
    }
    SECTION("a solenoidal bump of known norm separates by q^2 / 2U") {
        auto g = grid_1d(8.0, 2049, 2.0, 32);
        ScalarField uy(g), uz(g);
        const double U = 1.0, A = 0.05;
        const double kap = 2.0 * std::numbers::pi / g->L();
        ScalarField by(g), bz(g);
        for (int j = 0; j < g->nz(); ++j) {
            const double chi = bump(g->z(j) / 2.0);
            const double dchi = (bump((g->z(j) + 1e-6) / 2.0) - bump((g->z(j) - 1e-6) / 2.0)) /
                                2e-6;
            for (int i = 0; i < g->ny(); ++i) {
                by.at(i, j) = -A * std::cos(kap * g->y(i)) * dchi;
                bz.at(i, j) = -A * kap * std::sin(kap * g->y(i)) * chi;
                uy.at(i, j) = reference_shear(g->z(j), U) + by.at(i, j);
                uz.at(i, j) = bz.at(i, j);
            }
        }
        double q2 = 0.0;  // integral |u_b|^2 by the same quadrature
        for (int j = 0; j < g->nz(); ++j) {
            double row = 0.0;
            for (int i = 0; i < g->ny(); ++i)
                row += by.at(i, j) * by.at(i, j) + bz.at(i, j) * bz.at(i, j);
            q2 += g->w(j) * row / g->ny();
        }
        CHECK(energy_separation(uy, uz, U) == Approx(q2 / (2.0 * U)).epsilon(1e-12));
    }
}

TEST_CASE("dissipation rate on analytic fields") {
    SECTION("constant field dissipates nothing") {
        auto g = grid_1d(4.0, 129);
        ScalarField uy(g, 0.7), uz(g);
        CHECK(dissipation_rate(uy, uz, 1.0) == Approx(0.0).margin(1e-13));
    }
    SECTION("erf shear matches U / (2 sqrt(2 pi t))") {
        auto g = grid_1d(8.0, 4097);
        ScalarField uy(g), uz(g);
        const double t = 1.0;
        fill_shear(uy, uz, erf_shear, t);
        const double expect = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi * t));
        CHECK(dissipation_rate(uy, uz, 1.0) == Approx(expect).epsilon(1e-5));
    }
    SECTION("single Fourier mode matches the analytic-derivative quadrature") {
        auto g = grid_1d(6.0, 2049, 2.0, 64);
        const double A = 0.3, W = 1.5;
        const double kap = 2.0 * std::numbers::pi / g->L();
        ScalarField uy(g), uz(g);
        auto chi = [&](double z) { return std::exp(-z * z / (W * W)); };
        auto dchi = [&](double z) { return -2.0 * z / (W * W) * chi(z); };
        auto d2chi = [&](double z) {
            return (-2.0 / (W * W) + 4.0 * z * z / (W * W * W * W)) * chi(z);
        };
        for (int j = 0; j < g->nz(); ++j)
            for (int i = 0; i < g->ny(); ++i) {
                uy.at(i, j) = -A * std::cos(kap * g->y(i)) * dchi(g->z(j));
                uz.at(i, j) = -A * kap * std::sin(kap * g->y(i)) * chi(g->z(j));
            }
        // mean over y of |grad u|^2 = A^2/2 [k^2 dchi^2 + d2chi^2 + k^4 chi^2 + k^2 dchi^2]
        const double oracle = adaptive_simpson(
            [&](double z) {
                const double c = chi(z), dc = dchi(z), d2c = d2chi(z);
                return 0.5 * A * A *
                       (2.0 * kap * kap * dc * dc + d2c * d2c + kap * kap * kap * kap * c * c);
            },
            -6.0, 6.0, 1e-12);
        CHECK(dissipation_rate(uy, uz, 1.0) == Approx(oracle).epsilon(1e-5));
    }
}

TEST_CASE("interpolation check: endpoints, equality case, strict case") {
    SECTION("sharp shear gives lhs = 0") {
        auto g = grid_1d(4.0, 513);
        Profile ubar(g);
        for (int j = 0; j < g->nz(); ++j) ubar[j] = reference_shear(g->z(j), 1.0);
        const InterpolationCheck c = interpolation_check(ubar, 0.37, 1.0);
        CHECK(c.lhs == 0.0);
        CHECK(c.rhs == Approx(0.37 / std::sqrt(12.0)).epsilon(1e-14));
        CHECK(c.holds(1e-12));
    }
    SECTION("rarefaction saturates the inequality") {
        const double U = 1.0, t = 1.0;
        auto g = grid_1d(0.5 * U * t, 16385);  // fan exactly spans the grid
        Profile ubar(g);
        for (int j = 0; j < g->nz(); ++j) ubar[j] = rarefaction_profile(g->z(j), t, U);
        const double l_exact = U * t / std::sqrt(12.0);
        const InterpolationCheck c = interpolation_check(ubar, l_exact, U);
        CHECK(c.lhs / c.rhs == Approx(1.0).margin(1e-8));
        CHECK(c.monotonicity_violation <= 1e-15);
    }
    SECTION("half-slope profile stays strictly below the bound") {
        const double U = 1.0, t = 1.0;
        auto g = grid_1d(2.0, 8193);
        Profile ubar(g);
        for (int j = 0; j < g->nz(); ++j)
            ubar[j] = std::clamp(-g->z(j) / (2.0 * t), -0.5 * U, 0.5 * U);
        // the matching width: l^2 = (2/U) int z (ubar - u0)
        const double l2 = 2.0 * adaptive_simpson(
                                    [&](double z) {
                                        const double ub =
                                            std::clamp(-z / (2.0 * t), -0.5 * U, 0.5 * U);
                                        return z * (ub - reference_shear(z, U));
                                    },
                                    -2.0, 2.0, 1e-13) / U;
        const InterpolationCheck c = interpolation_check(ubar, std::sqrt(l2), U);
        const double lhs_oracle = adaptive_simpson(
            [&](double z) {
                return flux_g(std::clamp(-z / (2.0 * t), -0.5 * U, 0.5 * U), U);
            },
            -2.0, 2.0, 1e-13) / U;
        CHECK(c.lhs == Approx(lhs_oracle).epsilon(1e-6));
        CHECK(c.lhs < c.rhs);
    }
    SECTION("excursions are clipped and reported, wiggles flagged") {
        auto g = grid_1d(2.0, 129);
        Profile ubar(g);
        for (int j = 0; j < g->nz(); ++j)
            ubar[j] = std::clamp(-g->z(j), -0.5, 0.5);
        ubar[0] = 0.5 + 1e-3;   // overshoot above U/2
        ubar[64] = ubar[63] + 5e-4;  // local increase
        const InterpolationCheck c = interpolation_check(ubar, 0.3, 1.0);
        CHECK(c.clip_excursion == Approx(1e-3).epsilon(1e-6));
        CHECK(c.monotonicity_violation >= 5e-4);
    }
}

TEST_CASE("identity residuals on synthetic series") {
    SECTION("constant series isolates the identity defect exactly") {
        std::vector<DiagnosticsRecord> series(5);
        for (int i = 0; i < 5; ++i) {
            series[i].t = 0.1 * i;
            series[i].l = 0.5;
            series[i].E = 2.0;
            series[i].eps_diss = 0.0;
            series[i].cross_term = -0.25;  // (1/U) cross = -0.25 at U = 1
        }
        const IdentityResiduals r = identity_residuals(series, 1.0);
        CHECK(r.res_energy_max == 0.0);
        CHECK(r.res_lwidth_max == Approx(std::abs(1.0 - 0.25)).epsilon(1e-14));
        CHECK(std::isnan(series.front().res_energy));
        CHECK(series[1].res_lwidth == Approx(0.75).epsilon(1e-14));
    }
    SECTION("series shorter than 3 samples is rejected") {
        std::vector<DiagnosticsRecord> series(2);
        series[0].t = 0.0;
        series[1].t = 0.1;
        CHECK_THROWS_AS(identity_residuals(series, 1.0), std::invalid_argument);
    }
    SECTION("non-uniform sampling is rejected") {
        std::vector<DiagnosticsRecord> series(4);
        series[0].t = 0.0;
        series[1].t = 0.1;
        series[2].t = 0.25;
        series[3].t = 0.3;
        CHECK_THROWS_AS(identity_residuals(series, 1.0), std::invalid_argument);
    }
}

#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mixlab/conservation_law.hpp"
#include "mixlab/fft.hpp"
#include "mixlab/fields.hpp"

namespace mixlab {

// One time sample of the mixing-layer diagnostics. res_* stay nan until
// identity_residuals has seen the whole series (centered differences need
// both neighbours); cross_term carries the momentum-flux integral needed by
// the width identity and is not part of the CSV schema.
struct DiagnosticsRecord {
    double t = 0.0;
    double m = 0.0;
    double l = 0.0;
    double E = 0.0;
    double D = 0.0;
    double eps_diss = 0.0;
    double interp_lhs = 0.0;
    double interp_rhs = 0.0;
    double res_energy = std::numeric_limits<double>::quiet_NaN();
    double res_lwidth = std::numeric_limits<double>::quiet_NaN();
    double min_omega = 0.0;
    double boundary_contamination = 0.0;
    double cross_term = 0.0;
};

inline double reference_shear(double z, double U) { return z >= 0.0 ? -0.5 * U : 0.5 * U; }

// m = (1/U) integral z omega
inline double mixing_center(const Profile& omega_bar, double U) {
    return profile_moment(omega_bar, 1) / U;
}
inline double mixing_center(const ScalarField& omega, double U) {
    return mixing_center(horizontal_average(omega), U);
}

// l = ((1/U) integral z^2 omega)^(1/2); a negative radicand means the
// vorticity undershoot has corrupted the measure and is a data-quality error
inline double mixing_width(const Profile& omega_bar, double U) {
    const double l2 = profile_moment(omega_bar, 2) / U;
    if (l2 < 0.0)
        throw std::runtime_error("mixing_width: negative second moment (vorticity undershoot)");
    return std::sqrt(l2);
}
inline double mixing_width(const ScalarField& omega, double U) {
    return mixing_width(horizontal_average(omega), U);
}

// E = (1/2U) integral (U^2/4 - |u|^2); the integrand is assembled pointwise
// so only the decaying combination is ever integrated
inline double renormalized_energy(const ScalarField& uy, const ScalarField& uz, double U) {
    const Grid& g = uy.grid();
    double acc = 0.0;
    for (int j = 0; j < g.nz(); ++j) {
        const double* ry = uy.row(j);
        const double* rz = uz.row(j);
        double rowacc = 0.0;
        for (int i = 0; i < g.ny(); ++i)
            rowacc += 0.25 * U * U - ry[i] * ry[i] - rz[i] * rz[i];
        acc += g.w(j) * rowacc / g.ny();
    }
    return acc / (2.0 * U);
}

// D = (1/2U) integral |u - u0 e_y|^2
inline double energy_separation(const ScalarField& uy, const ScalarField& uz, double U) {
    const Grid& g = uy.grid();
    double acc = 0.0;
    for (int j = 0; j < g.nz(); ++j) {
        const double u0 = reference_shear(g.z(j), U);
        const double* ry = uy.row(j);
        const double* rz = uz.row(j);
        double rowacc = 0.0;
        for (int i = 0; i < g.ny(); ++i) {
            const double dy = ry[i] - u0;
            rowacc += dy * dy + rz[i] * rz[i];
        }
        acc += g.w(j) * rowacc / g.ny();
    }
    return acc / (2.0 * U);
}

// (1/U) integral u^y u^z — the momentum-flux side of the width identity
inline double momentum_flux_integral(const ScalarField& uy, const ScalarField& uz) {
    const Grid& g = uy.grid();
    double acc = 0.0;
    for (int j = 0; j < g.nz(); ++j) {
        const double* ry = uy.row(j);
        const double* rz = uz.row(j);
        double rowacc = 0.0;
        for (int i = 0; i < g.ny(); ++i) rowacc += ry[i] * rz[i];
        acc += g.w(j) * rowacc / g.ny();
    }
    return acc;
}

namespace detail {

// d/dz by centered differences, one-sided second order at the walls
inline void z_derivative_rows(const ScalarField& f, ScalarField& out) {
    const Grid& g = f.grid();
    const int ny = g.ny(), nz = g.nz();
    const double inv2dz = 1.0 / (2.0 * g.dz());
    for (int i = 0; i < ny; ++i) {
        out.at(i, 0) = (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) * inv2dz;
        out.at(i, nz - 1) =
            (3.0 * f.at(i, nz - 1) - 4.0 * f.at(i, nz - 2) + f.at(i, nz - 3)) * inv2dz;
    }
    for (int j = 1; j < nz - 1; ++j) {
        const double* lo = f.row(j - 1);
        const double* hi = f.row(j + 1);
        double* o = out.row(j);
        for (int i = 0; i < ny; ++i) o[i] = (hi[i] - lo[i]) * inv2dz;
    }
}

// mean over y of (d_y f)^2 per z-node, via Parseval on the row spectrum
inline void y_derivative_sq_mean(const ScalarField& f, const RowFft& fft, double L,
                                 std::vector<double>& out) {
    const Grid& g = f.grid();
    const int nk = fft.nk();
    std::vector<std::complex<double>> spec(nk);
    out.assign(g.nz(), 0.0);
    const double two_pi_over_L = 2.0 * std::numbers::pi / L;
    for (int j = 0; j < g.nz(); ++j) {
        fft.forward(f.row(j), spec.data());
        double acc = 0.0;
        for (int k = 1; k < nk - 1; ++k) {
            const double kap = two_pi_over_L * k;
            acc += 2.0 * kap * kap * std::norm(spec[k]);
        }
        // the Nyquist mode has no consistent first derivative; fields are
        // dealiased well below it
        out[j] = acc;
    }
}

} // namespace detail

// (1/U) integral |grad u|^2 with spectral y-derivatives and centered
// z-derivatives; pass an existing RowFft to amortize planning across samples
inline double dissipation_rate(const ScalarField& uy, const ScalarField& uz, double U,
                               const RowFft* fft_in = nullptr) {
    const Grid& g = uy.grid();
    std::unique_ptr<RowFft> own;
    if (!fft_in) {
        own = std::make_unique<RowFft>(g.ny());
        fft_in = own.get();
    }
    const RowFft& fft = *fft_in;
    std::vector<double> dy2_uy, dy2_uz;
    detail::y_derivative_sq_mean(uy, fft, g.L(), dy2_uy);
    detail::y_derivative_sq_mean(uz, fft, g.L(), dy2_uz);
    ScalarField dz_uy(uy.grid_ptr()), dz_uz(uy.grid_ptr());
    detail::z_derivative_rows(uy, dz_uy);
    detail::z_derivative_rows(uz, dz_uz);
    double acc = 0.0;
    for (int j = 0; j < g.nz(); ++j) {
        const double* a = dz_uy.row(j);
        const double* b = dz_uz.row(j);
        double rowacc = 0.0;
        for (int i = 0; i < g.ny(); ++i) rowacc += a[i] * a[i] + b[i] * b[i];
        acc += g.w(j) * (rowacc / g.ny() + dy2_uy[j] + dy2_uz[j]);
    }
    return acc / U;
}

struct InterpolationCheck {
    double lhs = 0.0;                     // (1/U) integral g(ubar)
    double rhs = 0.0;                     // U l / sqrt(12)
    double clip_excursion = 0.0;          // max distance of ubar outside [-U/2, U/2]
    double monotonicity_violation = 0.0;  // max increase of ubar between nodes
    bool holds(double slack) const { return lhs <= rhs + slack; }
};

// Trajectory form of the interpolation inequality. ubar excursions beyond
// [-U/2, U/2] (possible at discretization level) are clipped before
// evaluating g, and reported.
inline InterpolationCheck interpolation_check(const Profile& ubar, double l, double U) {
    InterpolationCheck c;
    double lhs = 0.0;
    for (int j = 0; j < ubar.size(); ++j) {
        const double v = ubar[j];
        c.clip_excursion = std::max(c.clip_excursion, std::abs(v) - 0.5 * U);
        lhs += ubar.grid().w(j) * flux_g(std::clamp(v, -0.5 * U, 0.5 * U), U);
        if (j > 0) c.monotonicity_violation =
                       std::max(c.monotonicity_violation, ubar[j] - ubar[j - 1]);
    }
    c.clip_excursion = std::max(c.clip_excursion, 0.0);
    c.lhs = lhs / U;
    c.rhs = U * l / std::sqrt(12.0);
    return c;
}

struct IdentityResiduals {
    double res_energy_max = 0.0;
    double res_lwidth_max = 0.0;
};

// Centered-difference residuals of the energy-balance and width identities
// over a uniformly sampled series, normalized by U^2. Fills the per-record
// res_* fields (endpoints stay nan) and returns the interior maxima.
inline IdentityResiduals identity_residuals(std::vector<DiagnosticsRecord>& series, double U) {
    const int n = static_cast<int>(series.size());
    if (n < 3) throw std::invalid_argument("identity_residuals: need at least 3 samples");
    const double dt0 = series[1].t - series[0].t;
    if (!(dt0 > 0.0)) throw std::invalid_argument("identity_residuals: non-increasing samples");
    for (int i = 1; i < n; ++i)
        if (std::abs(series[i].t - series[i - 1].t - dt0) > 1e-6 * dt0)
            throw std::invalid_argument("identity_residuals: series not uniformly sampled");

    IdentityResiduals out;
    const double U2 = U * U;
    for (int i = 1; i < n - 1; ++i) {
        const double dEdt = (series[i + 1].E - series[i - 1].E) / (2.0 * dt0);
        const double re = std::abs(dEdt - series[i].eps_diss) / U2;
        const double l2hi = series[i + 1].l * series[i + 1].l;
        const double l2lo = series[i - 1].l * series[i - 1].l;
        const double dhalf_l2 = 0.5 * (l2hi - l2lo) / (2.0 * dt0);
        const double rl = std::abs(dhalf_l2 - 1.0 - series[i].cross_term / U) / U2;
        series[i].res_energy = re;
        series[i].res_lwidth = rl;
        out.res_energy_max = std::max(out.res_energy_max, re);
        out.res_lwidth_max = std::max(out.res_lwidth_max, rl);
    }
    return out;
}

} // namespace mixlab

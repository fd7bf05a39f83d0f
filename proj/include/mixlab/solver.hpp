#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "mixlab/fields.hpp"
#include "mixlab/poisson.hpp"

namespace mixlab {

struct CflError : SolverError {
    using SolverError::SolverError;
};

// Prognostic vorticity plus the fields recovered from it. The recovery
// invariants (u^y = -d_z psi + mean profile, u^z = d_y psi, lap psi = omega,
// zero discrete divergence) hold whenever the state came out of
// VelocityRecovery::solve.
struct FlowState {
    ScalarField omega, psi, uy, uz;
    double t = 0.0;
    double max_abs_uy = 0.0;
    double max_abs_uz = 0.0;
};

// Adaptive step target: advective limits in both directions plus the
// explicit-diffusion scale dz^2/2 kept as an accuracy bound (the diffusion
// term itself is integrated implicitly).
inline double cfl_dt(const FlowState& s, const Params& p) {
    const Grid& g = s.omega.grid();
    double muy = 0.0, muz = 0.0;
    bool finite = true;
    for (double v : s.uy.values()) {
        muy = std::max(muy, std::abs(v));
        finite = finite && std::isfinite(v);
    }
    for (double v : s.uz.values()) {
        muz = std::max(muz, std::abs(v));
        finite = finite && std::isfinite(v);
    }
    if (!finite) return std::numeric_limits<double>::quiet_NaN();
    double lim = 0.5 * g.dz() * g.dz();
    if (muy > 0.0) lim = std::min(lim, g.dy() / muy);
    if (muz > 0.0) lim = std::min(lim, g.dz() / muz);
    return p.cfl_number * lim;
}

// One IMEX step of the vorticity equation: Crank-Nicolson for the Laplacian,
// explicit (variable-step) Adams-Bashforth for the conservative advection
// div(u omega), homogeneous Dirichlet for omega at z = +-H, then a velocity
// recovery. Owns the AB history, so a fresh stepper starts with an Euler
// predictor.
class VorticityStepper {
public:
    VorticityStepper(GridPtr grid, const Params& params, int threads = 1)
        : grid_(std::move(grid)), threads_(threads), vr_(grid_, params, threads) {
        const int nz = grid_->nz();
        const int nk = vr_.nk();
        nhat_.allocate(static_cast<std::size_t>(nz) * nk);
        nhat_prev_.allocate(static_cast<std::size_t>(nz) * nk);
        prod_y_.allocate(static_cast<std::size_t>(nz) * grid_->ny());
        prod_z_.allocate(static_cast<std::size_t>(nz) * grid_->ny());
        ahat_.allocate(static_cast<std::size_t>(nz) * nk);
        bhat_.allocate(static_cast<std::size_t>(nz) * nk);
    }

    VelocityRecovery& recovery() { return vr_; }
    const VelocityRecovery& recovery() const { return vr_; }

    // Derive velocities from state.omega and reset the multistep history.
    // omega itself is re-synthesized from its dealiased spectrum so the
    // state is consistent with the solver's band limit.
    void initialize(FlowState& state) {
        if (!state.omega.finite()) throw SolverError("initialize: non-finite vorticity");
        vr_.load_physical(state.omega);
        VelocityFields vel;
        vel.psi = std::move(state.psi);
        vel.uy = std::move(state.uy);
        vel.uz = std::move(state.uz);
        vr_.solve(vel, &state.omega);
        state.psi = std::move(vel.psi);
        state.uy = std::move(vel.uy);
        state.uz = std::move(vel.uz);
        state.max_abs_uy = vel.max_abs_uy;
        state.max_abs_uz = vel.max_abs_uz;
        have_prev_ = false;
    }

    struct StepInfo {
        double min_omega = 0.0;
        double circulation = 0.0;
    };

    StepInfo advance(FlowState& state, double dt) {
        const Grid& g = *grid_;
        const int ny = g.ny(), nz = g.nz(), nk = vr_.nk(), kmax = vr_.kmax();
        if (!(dt > 0.0)) throw SolverError("advance: dt must be > 0");
        double adv_limit = std::numeric_limits<double>::infinity();
        if (state.max_abs_uy > 0.0) adv_limit = std::min(adv_limit, g.dy() / state.max_abs_uy);
        if (state.max_abs_uz > 0.0) adv_limit = std::min(adv_limit, g.dz() / state.max_abs_uz);
        if (!std::isfinite(state.max_abs_uy) || !std::isfinite(state.max_abs_uz))
            throw SolverError("advance: non-finite velocity");
        if (dt > adv_limit)
            throw CflError("advance: dt = " + std::to_string(dt) +
                           " exceeds the advective CFL bound " + std::to_string(adv_limit));

        // conservative advection fluxes in physical space
        parallel_for(nz, threads_, [&](int j) {
            const double* w = state.omega.row(j);
            const double* uy = state.uy.row(j);
            const double* uz = state.uz.row(j);
            double* py = prod_y_.data() + static_cast<std::size_t>(j) * ny;
            double* pz = prod_z_.data() + static_cast<std::size_t>(j) * ny;
            for (int i = 0; i < ny; ++i) {
                py[i] = uy[i] * w[i];
                pz[i] = uz[i] * w[i];
            }
            vr_.fft().forward(py, ahat_.data() + static_cast<std::size_t>(j) * nk);
            vr_.fft().forward(pz, bhat_.data() + static_cast<std::size_t>(j) * nk);
        });

        // N_hat = i kappa (uy omega)_hat + d_z (uz omega)_hat, interior rows
        const double inv2dz = 1.0 / (2.0 * g.dz());
        parallel_for(kmax + 1, threads_, [&](int k) {
            const double kap = vr_.kappa(k);
            const std::complex<double> ik(0.0, kap);
            for (int j = 1; j < nz - 1; ++j) {
                const std::size_t c = static_cast<std::size_t>(j) * nk + k;
                nhat_[c] = ik * ahat_[c] + (bhat_[c + nk] - bhat_[c - nk]) * inv2dz;
            }
        });

        // Adams-Bashforth weights; variable-step form so sample-aligned
        // clipped steps stay second order
        double c_now = 1.0, c_prev = 0.0;
        if (have_prev_) {
            const double r = dt / dt_prev_;
            c_now = 1.0 + 0.5 * r;
            c_prev = -0.5 * r;
        }

        // Crank-Nicolson solve per mode, in place on the vorticity spectrum
        const double dz2 = g.dz() * g.dz();
        const double rdiff = 0.5 * dt / dz2;
        std::complex<double>* what = vr_.omega_hat();
        parallel_for(kmax + 1, threads_, [&](int k) {
            const double kap = vr_.kappa(k);
            std::vector<std::complex<double>> rhs(nz - 2);
            for (int j = 1; j < nz - 1; ++j) {
                const std::size_t c = static_cast<std::size_t>(j) * nk + k;
                const std::complex<double> lap =
                    (what[c - nk] - 2.0 * what[c] + what[c + nk]) / dz2 - kap * kap * what[c];
                std::complex<double> adv = c_now * nhat_[c];
                if (have_prev_) adv += c_prev * nhat_prev_[c];
                rhs[j - 1] = what[c] + 0.5 * dt * lap - dt * adv;
            }
            for (int j = 1; j < nz - 1; ++j)
                what[static_cast<std::size_t>(j) * nk + k] = rhs[j - 1];
            what[k] = 0.0;
            what[static_cast<std::size_t>(nz - 1) * nk + k] = 0.0;
            std::vector<double> cw;
            std::vector<std::complex<double>> dw;
            solve_tridiagonal_const(-rdiff, 1.0 + 0.5 * dt * kap * kap + 2.0 * rdiff, -rdiff,
                                    what + static_cast<std::size_t>(nk) + k, nk, nz - 2, cw, dw);
        });

        std::swap(nhat_, nhat_prev_);
        dt_prev_ = dt;
        have_prev_ = true;

        VelocityFields vel;
        vel.psi = std::move(state.psi);
        vel.uy = std::move(state.uy);
        vel.uz = std::move(state.uz);
        vr_.solve(vel, &state.omega);
        state.psi = std::move(vel.psi);
        state.uy = std::move(vel.uy);
        state.uz = std::move(vel.uz);
        state.max_abs_uy = vel.max_abs_uy;
        state.max_abs_uz = vel.max_abs_uz;
        state.t += dt;

        StepInfo info;
        double mn = std::numeric_limits<double>::infinity();
        bool finite = true;
        for (double v : state.omega.values()) {
            mn = std::min(mn, v);
            finite = finite && std::isfinite(v);
        }
        if (!finite) throw SolverError("advance: non-finite vorticity after step");
        info.min_omega = mn;
        info.circulation = vr_.circulation();
        return info;
    }

private:
    GridPtr grid_;
    int threads_;
    VelocityRecovery vr_;
    AlignedBuffer<std::complex<double>> nhat_, nhat_prev_;
    AlignedBuffer<std::complex<double>> ahat_, bhat_;
    AlignedBuffer<double> prod_y_, prod_z_;
    double dt_prev_ = 0.0;
    bool have_prev_ = false;
};

// One-shot step: fresh stepper (Euler predictor), one IMEX step.
inline FlowState step(const FlowState& s, double dt, const Params& p) {
    VorticityStepper st(s.omega.grid_ptr(), p);
    FlowState out = s;
    st.initialize(out);
    st.advance(out, dt);
    return out;
}

// x' = x/L, t' = t/L, omega' = L omega on the unit-width channel; the node
// values land exactly on the rescaled grid, so no interpolation happens.
// Velocities are recovered by a fresh Poisson solve on the new grid.
inline FlowState rescale_state(const FlowState& s, const Params& p) {
    const Grid& g = s.omega.grid();
    const double L = g.L();
    auto grid2 = std::make_shared<Grid>(1.0, g.H() / L, g.ny(), g.nz());
    FlowState out;
    out.omega = ScalarField(grid2);
    for (int j = 0; j < g.nz(); ++j) {
        const double* src = s.omega.row(j);
        double* dst = out.omega.row(j);
        for (int i = 0; i < g.ny(); ++i) dst[i] = L * src[i];
    }
    out.t = s.t / L;
    Params p2 = p;
    p2.L = 1.0;
    p2.H = g.H() / L;
    VelocityFields vel = poisson_solve(out.omega, p2);
    out.psi = std::move(vel.psi);
    out.uy = std::move(vel.uy);
    out.uz = std::move(vel.uz);
    out.max_abs_uy = vel.max_abs_uy;
    out.max_abs_uz = vel.max_abs_uz;
    return out;
}

} // namespace mixlab

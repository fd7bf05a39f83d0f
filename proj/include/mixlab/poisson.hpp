#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "mixlab/fft.hpp"
#include "mixlab/fields.hpp"
#include "mixlab/parallel.hpp"
#include "mixlab/tridiag.hpp"

namespace mixlab {

struct VelocityFields {
    ScalarField psi, uy, uz;
    double max_abs_uy = 0.0;
    double max_abs_uz = 0.0;
};

// Recovers streamfunction and velocity from vorticity on the periodic
// channel. Per y-wavenumber kappa != 0 a Dirichlet Helmholtz solve
// (d_zz - kappa^2) psi_hat = omega_hat; the mean mode integrates
// ubar(z) = U/2 - int_{-H}^{z} omega_bar, anchoring the bottom shear value,
// which makes circulation consistency explicit. Spectra are truncated at
// the 2/3 dealiasing limit; the same centered z-derivative is used for
// u^y = -d_z psi and for divergence checks, so the discrete divergence of
// the k != 0 part vanishes identically.
class VelocityRecovery {
public:
    VelocityRecovery(GridPtr grid, const Params& params, int threads = 1)
        : grid_(std::move(grid)),
          params_(params),
          threads_(threads),
          fft_(grid_->ny()),
          nk_(grid_->ny() / 2 + 1),
          kmax_(grid_->ny() / 3) {
        const std::size_t n = static_cast<std::size_t>(grid_->nz()) * nk_;
        omega_hat_.allocate(n);
        psi_hat_.allocate(n);
        uy_hat_.allocate(n);
        uz_hat_.allocate(n);
    }

    const Grid& grid() const { return *grid_; }
    int nk() const { return nk_; }
    int kmax() const { return kmax_; }
    int threads() const { return threads_; }
    double kappa(int k) const { return 2.0 * std::numbers::pi * k / grid_->L(); }
    const RowFft& fft() const { return fft_; }

    std::complex<double>* omega_hat() { return omega_hat_.data(); }
    const std::complex<double>* omega_hat() const { return omega_hat_.data(); }
    const std::complex<double>* psi_hat() const { return psi_hat_.data(); }
    const std::complex<double>* uy_hat() const { return uy_hat_.data(); }
    const std::complex<double>* uz_hat() const { return uz_hat_.data(); }

    std::complex<double>& omega_hat(int k, int j) { return omega_hat_[idx(k, j)]; }
    std::complex<double> psi_hat(int k, int j) const { return psi_hat_[idx(k, j)]; }
    std::complex<double> uy_hat(int k, int j) const { return uy_hat_[idx(k, j)]; }
    std::complex<double> uz_hat(int k, int j) const { return uz_hat_[idx(k, j)]; }

    void load_physical(const ScalarField& omega) {
        parallel_for(grid_->nz(), threads_, [&](int j) {
            fft_.forward(omega.row(j), omega_hat_.data() + static_cast<std::size_t>(j) * nk_);
        });
        truncate_spectrum();
    }

    // circulation of the currently loaded vorticity
    double circulation() const {
        double acc = 0.0;
        for (int j = 0; j < grid_->nz(); ++j)
            acc += grid_->w(j) * omega_hat_[idx(0, j)].real();
        return acc;
    }

    void solve(VelocityFields& out, ScalarField* omega_out = nullptr) {
        const int nz = grid_->nz();
        const double U = params_.U;
        const double circ = circulation();
        if (std::abs(circ - U) > params_.tol.circulation * U)
            throw SolverError("poisson_solve: circulation " + std::to_string(circ) +
                              " inconsistent with U = " + std::to_string(U));

        // mean mode: ubar by anchored antiderivative, psibar from -ubar
        std::vector<double> ubar(nz), psibar(nz);
        ubar[0] = 0.5 * U;
        for (int j = 1; j < nz; ++j) {
            const double wbar_lo = omega_hat_[idx(0, j - 1)].real();
            const double wbar_hi = omega_hat_[idx(0, j)].real();
            ubar[j] = ubar[j - 1] - 0.5 * grid_->dz() * (wbar_lo + wbar_hi);
        }
        psibar[0] = 0.0;
        for (int j = 1; j < nz; ++j)
            psibar[j] = psibar[j - 1] - 0.5 * grid_->dz() * (ubar[j - 1] + ubar[j]);

        // k != 0 modes: Helmholtz solve, then spectral velocities
        const double dz = grid_->dz();
        const double inv_dz2 = 1.0 / (dz * dz);
        parallel_for(kmax_, threads_, [&](int km1) {
            const int k = km1 + 1;
            const double kap = kappa(k);
            std::complex<double>* psi_col = psi_hat_.data() + k;
            const std::complex<double>* w_col = omega_hat_.data() + k;
            psi_col[0] = 0.0;
            psi_col[static_cast<std::size_t>(nz - 1) * nk_] = 0.0;
            for (int j = 1; j < nz - 1; ++j)
                psi_col[static_cast<std::size_t>(j) * nk_] = w_col[static_cast<std::size_t>(j) * nk_];
            std::vector<double> cw;
            std::vector<std::complex<double>> dw;
            solve_tridiagonal_const(inv_dz2, -2.0 * inv_dz2 - kap * kap, inv_dz2,
                                    psi_col + nk_, nk_, nz - 2, cw, dw);
            // u^y fluctuation = -d_z psi (one-sided second order at the walls)
            std::complex<double>* uy_col = uy_hat_.data() + k;
            std::complex<double>* uz_col = uz_hat_.data() + k;
            auto P = [&](int j) { return psi_col[static_cast<std::size_t>(j) * nk_]; };
            uy_col[0] = -(-3.0 * P(0) + 4.0 * P(1) - P(2)) / (2.0 * dz);
            for (int j = 1; j < nz - 1; ++j)
                uy_col[static_cast<std::size_t>(j) * nk_] = -(P(j + 1) - P(j - 1)) / (2.0 * dz);
            uy_col[static_cast<std::size_t>(nz - 1) * nk_] =
                -(3.0 * P(nz - 1) - 4.0 * P(nz - 2) + P(nz - 3)) / (2.0 * dz);
            const std::complex<double> ik(0.0, kap);
            for (int j = 0; j < nz; ++j)
                uz_col[static_cast<std::size_t>(j) * nk_] = ik * P(j);
        });
        // zero untouched modes once (k = 0 overwritten below, k > kmax unused)
        parallel_for(nz, threads_, [&](int j) {
            std::complex<double>* prow = psi_hat_.data() + static_cast<std::size_t>(j) * nk_;
            std::complex<double>* yrow = uy_hat_.data() + static_cast<std::size_t>(j) * nk_;
            std::complex<double>* zrow = uz_hat_.data() + static_cast<std::size_t>(j) * nk_;
            prow[0] = psibar[j];
            yrow[0] = ubar[j];
            zrow[0] = 0.0;
            for (int k = kmax_ + 1; k < nk_; ++k) prow[k] = yrow[k] = zrow[k] = 0.0;
        });

        if (!out.psi.grid_ptr()) {
            out.psi = ScalarField(grid_);
            out.uy = ScalarField(grid_);
            out.uz = ScalarField(grid_);
        }
        std::vector<double> row_max_uy(nz, 0.0), row_max_uz(nz, 0.0);
        parallel_for(nz, threads_, [&](int j) {
            const std::size_t off = static_cast<std::size_t>(j) * nk_;
            fft_.inverse(psi_hat_.data() + off, out.psi.row(j));
            fft_.inverse(uy_hat_.data() + off, out.uy.row(j));
            fft_.inverse(uz_hat_.data() + off, out.uz.row(j));
            if (omega_out) fft_.inverse(omega_hat_.data() + off, omega_out->row(j));
            double my = 0.0, mz = 0.0;
            const double* ry = out.uy.row(j);
            const double* rz = out.uz.row(j);
            for (int i = 0; i < grid_->ny(); ++i) {
                my = std::max(my, std::abs(ry[i]));
                mz = std::max(mz, std::abs(rz[i]));
            }
            row_max_uy[j] = my;
            row_max_uz[j] = mz;
        });
        out.max_abs_uy = 0.0;
        out.max_abs_uz = 0.0;
        for (int j = 0; j < nz; ++j) {
            out.max_abs_uy = std::max(out.max_abs_uy, row_max_uy[j]);
            out.max_abs_uz = std::max(out.max_abs_uz, row_max_uz[j]);
        }
    }

    void truncate_spectrum() {
        parallel_for(grid_->nz(), threads_, [&](int j) {
            std::complex<double>* row = omega_hat_.data() + static_cast<std::size_t>(j) * nk_;
            for (int k = kmax_ + 1; k < nk_; ++k) row[k] = 0.0;
        });
    }

private:
    std::size_t idx(int k, int j) const { return static_cast<std::size_t>(j) * nk_ + k; }

    GridPtr grid_;
    Params params_;
    int threads_;
    RowFft fft_;
    int nk_, kmax_;
    AlignedBuffer<std::complex<double>> omega_hat_, psi_hat_, uy_hat_, uz_hat_;
};

inline VelocityFields poisson_solve(const ScalarField& omega, const Params& params,
                                    int threads = 1) {
    VelocityRecovery vr(omega.grid_ptr(), params, threads);
    vr.load_physical(omega);
    VelocityFields out;
    vr.solve(out);
    return out;
}

// max-norm discrete divergence, with the same operators the recovery uses
inline double max_divergence(const VelocityRecovery& vr, const ScalarField& uy,
                             const ScalarField& uz) {
    const Grid& g = uy.grid();
    RowFft fft(g.ny());
    const int nk = g.ny() / 2 + 1;
    std::vector<std::complex<double>> yh(static_cast<std::size_t>(g.nz()) * nk);
    std::vector<std::complex<double>> zh(yh.size());
    for (int j = 0; j < g.nz(); ++j) {
        fft.forward(uy.row(j), yh.data() + static_cast<std::size_t>(j) * nk);
        fft.forward(uz.row(j), zh.data() + static_cast<std::size_t>(j) * nk);
    }
    auto at = [&](std::vector<std::complex<double>>& a, int k, int j) -> std::complex<double>& {
        return a[static_cast<std::size_t>(j) * nk + k];
    };
    const double dz = g.dz();
    double worst = 0.0;
    for (int k = 0; k < nk; ++k) {
        const std::complex<double> ik(0.0, vr.kappa(k));
        for (int j = 0; j < g.nz(); ++j) {
            std::complex<double> dzuz;
            if (j == 0)
                dzuz = (-3.0 * at(zh, k, 0) + 4.0 * at(zh, k, 1) - at(zh, k, 2)) / (2.0 * dz);
            else if (j == g.nz() - 1)
                dzuz = (3.0 * at(zh, k, j) - 4.0 * at(zh, k, j - 1) + at(zh, k, j - 2)) / (2.0 * dz);
            else
                dzuz = (at(zh, k, j + 1) - at(zh, k, j - 1)) / (2.0 * dz);
            worst = std::max(worst, std::abs(ik * at(yh, k, j) + dzuz));
        }
    }
    return worst;
}

} // namespace mixlab

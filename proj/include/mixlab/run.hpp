#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mixlab/diagnostics.hpp"
#include "mixlab/initial_data.hpp"
#include "mixlab/solver.hpp"

namespace mixlab {

struct RunOptions {
    double sample_interval = 0.005;
    int snapshot_every = 0;  // emit the state every N samples; 0 disables
    int threads = 1;
    bool keep_final_state = false;

    void validate(const Params& p) const {
        if (!(sample_interval > 0.0) || sample_interval > p.T)
            throw ConfigError("sampling.interval: must lie in (0, T]");
        if (snapshot_every < 0) throw ConfigError("sampling.snapshot_every: must be >= 0");
        if (threads < 1) throw ConfigError("threads: must be >= 1");
    }
};

class DiagnosticsSink {
public:
    virtual ~DiagnosticsSink() = default;
    // streamed as computed; res_* are still nan here
    virtual void on_record(const DiagnosticsRecord&) {}
    virtual void on_sample_state(const FlowState&, int /*sample_index*/) {}
};

struct RunSummary {
    std::vector<DiagnosticsRecord> series;
    bool accepted = false;
    std::string abort_reason;

    double sample_interval = 0.0;
    long steps = 0;
    double wall_seconds = 0.0;

    double max_abs_m = 0.0;
    double max_circulation_drift = 0.0;  // relative to U
    double min_omega = 0.0;
    double omega_scale = 0.0;  // max of the initial vorticity
    double max_interp_violation = -std::numeric_limits<double>::infinity();  // lhs - rhs
    double max_boundary_contamination = 0.0;
    double res_energy_max = std::numeric_limits<double>::quiet_NaN();
    double res_lwidth_max = std::numeric_limits<double>::quiet_NaN();
    int positivity_warnings = 0;

    std::optional<FlowState> final_state;
};

namespace detail {

inline DiagnosticsRecord sample_record(const FlowState& state, const Params& params,
                                       const RowFft& fft) {
    DiagnosticsRecord r;
    r.t = state.t;
    Profile wbar = horizontal_average(state.omega);
    Profile ubar = horizontal_average(state.uy);
    r.m = mixing_center(wbar, params.U);
    r.l = mixing_width(wbar, params.U);
    r.E = renormalized_energy(state.uy, state.uz, params.U);
    r.D = energy_separation(state.uy, state.uz, params.U);
    r.eps_diss = dissipation_rate(state.uy, state.uz, params.U, &fft);
    r.cross_term = momentum_flux_integral(state.uy, state.uz);
    const InterpolationCheck ic = interpolation_check(ubar, r.l, params.U);
    r.interp_lhs = ic.lhs;
    r.interp_rhs = ic.rhs;
    r.boundary_contamination = boundary_contamination(wbar);
    return r;
}

} // namespace detail

// Integrate from t = 0 to T, emitting one DiagnosticsRecord per sample
// interval. Aborts (accepted = false) on non-finite fields or when the
// vorticity profile stops clearing the truncation boundary.
inline RunSummary run(const Params& params, const InitialDataSpec& spec, const RunOptions& opt,
                      DiagnosticsSink* sink = nullptr) {
    params.validate();
    opt.validate(params);
    const auto t0_wall = std::chrono::steady_clock::now();

    GridPtr grid = make_grid(params);
    ScalarField omega0 = build_initial_vorticity(spec, params, grid);
    const ValidationReport rep = validate_initial_data(omega0, params);
    if (!rep.ok())
        throw ConfigError("initial data rejected: " + rep.describe());

    RunSummary summary;
    for (double v : omega0.values()) summary.omega_scale = std::max(summary.omega_scale, v);

    VorticityStepper stepper(grid, params, opt.threads);
    FlowState state;
    state.omega = std::move(omega0);
    stepper.initialize(state);
    summary.min_omega = std::numeric_limits<double>::infinity();
    for (double v : state.omega.values()) summary.min_omega = std::min(summary.min_omega, v);

    const int n_samples = std::max(1, static_cast<int>(std::llround(params.T / opt.sample_interval)));
    const double ds = params.T / n_samples;
    summary.sample_interval = ds;

    const RowFft diag_fft(grid->ny());
    double window_min_omega = summary.min_omega;

    auto emit = [&](int sample_idx) {
        DiagnosticsRecord r = detail::sample_record(state, params, diag_fft);
        r.min_omega = window_min_omega;
        summary.series.push_back(r);
        summary.max_abs_m = std::max(summary.max_abs_m, std::abs(r.m));
        summary.max_interp_violation =
            std::max(summary.max_interp_violation, r.interp_lhs - r.interp_rhs);
        summary.max_boundary_contamination =
            std::max(summary.max_boundary_contamination, r.boundary_contamination);
        if (r.min_omega < -params.tol.positivity * summary.omega_scale)
            ++summary.positivity_warnings;
        if (sink) {
            sink->on_record(r);
            if (opt.snapshot_every > 0 && sample_idx % opt.snapshot_every == 0)
                sink->on_sample_state(state, sample_idx);
        }
        return r.boundary_contamination;
    };

    emit(0);
    bool aborted = false;
    for (int s = 1; s <= n_samples && !aborted; ++s) {
        const double t_target = s * ds;
        try {
            while (state.t < t_target - 1e-12 * params.T) {
                double dt_nom = params.adaptive_dt() ? cfl_dt(state, params) : params.dt;
                double dt = std::min(dt_nom, t_target - state.t);
                if (t_target - state.t - dt < 1e-9 * dt) dt = t_target - state.t;
                const auto info = stepper.advance(state, dt);
                ++summary.steps;
                window_min_omega = std::min(window_min_omega, info.min_omega);
                summary.min_omega = std::min(summary.min_omega, info.min_omega);
                summary.max_circulation_drift =
                    std::max(summary.max_circulation_drift,
                             std::abs(info.circulation - params.U) / params.U);
            }
        } catch (const SolverError& e) {
            summary.abort_reason = e.what();
            aborted = true;
            break;
        }
        state.t = t_target;  // exact sample times, no accumulation drift
        const double contamination = emit(s);
        window_min_omega = std::numeric_limits<double>::infinity();
        for (double v : state.omega.values()) window_min_omega = std::min(window_min_omega, v);
        if (contamination > params.tol.boundary_contamination) {
            summary.abort_reason =
                "boundary contamination " + std::to_string(contamination) +
                " exceeds tolerance (H too small for this T)";
            aborted = true;
        }
    }

    if (summary.series.size() >= 3) {
        const IdentityResiduals res = identity_residuals(summary.series, params.U);
        summary.res_energy_max = res.res_energy_max;
        summary.res_lwidth_max = res.res_lwidth_max;
    }
    summary.accepted = !aborted;
    if (opt.keep_final_state) summary.final_state = std::move(state);
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_wall).count();
    return summary;
}

} // namespace mixlab

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "mixlab/conservation_law.hpp"

namespace mixlab {

// Piecewise-constant non-increasing profile: value values[i] on
// [breaks[i], breaks[i+1]), +U/2 below breaks.front(), -U/2 above
// breaks.back(). The step against which moments are taken sits at z = 0.
struct MonotoneProfile {
    std::vector<double> breaks;  // size n+1, strictly increasing
    std::vector<double> values;  // size n, non-increasing, within [-U/2, U/2]
    double U = 1.0;

    int steps() const { return static_cast<int>(values.size()); }

    void validate() const {
        if (breaks.size() != values.size() + 1 || values.empty())
            throw std::invalid_argument("MonotoneProfile: need n+1 breakpoints for n values");
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            if (!(breaks[i] < breaks[i + 1]))
                throw std::invalid_argument("MonotoneProfile: breakpoints must increase strictly");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (std::abs(values[i]) > 0.5 * U * (1.0 + 1e-12))
                throw std::invalid_argument("MonotoneProfile: value outside [-U/2, U/2]");
            if (i > 0 && values[i] > values[i - 1] + 1e-15 * U)
                throw std::invalid_argument("MonotoneProfile: values must be non-increasing");
        }
    }

    double operator()(double z) const {
        if (z < breaks.front()) return 0.5 * U;
        if (z >= breaks.back()) return -0.5 * U;
        const auto it = std::upper_bound(breaks.begin(), breaks.end(), z);
        return values[static_cast<std::size_t>(it - breaks.begin()) - 1];
    }
};

struct SideEvaluation {
    double lhs = 0.0;     // integral of g(s)
    double moment = 0.0;  // integral of z (s - s0)
    double rhs = 0.0;     // C_# sqrt(moment)
    double ratio = 0.0;   // lhs / rhs, 0 when both sides vanish
};

namespace detail {

// integral of z*(v - s0(z)) over [a, b) for constant v; s0 jumps at 0
inline double moment_piece(double a, double b, double v, double U) {
    double acc = 0.0;
    if (a < 0.0) {
        const double hi = std::min(b, 0.0);
        acc += (v - 0.5 * U) * 0.5 * (hi * hi - a * a);
    }
    if (b > 0.0) {
        const double lo = std::max(a, 0.0);
        acc += (v + 0.5 * U) * 0.5 * (b * b - lo * lo);
    }
    return acc;
}

} // namespace detail

// Both sides of the interpolation inequality, evaluated in closed form
// (exact for piecewise-constant profiles): a violation here is a genuine
// counterexample, not quadrature noise.
inline SideEvaluation evaluate_sides(const MonotoneProfile& s, const FluxFunction& flux) {
    s.validate();
    if (std::abs(s.U - flux.U) > 1e-12 * std::max(s.U, flux.U))
        throw std::invalid_argument("evaluate_sides: profile and flux disagree on U");
    const double U = s.U;
    SideEvaluation ev;
    for (int i = 0; i < s.steps(); ++i) {
        const double a = s.breaks[i], b = s.breaks[i + 1];
        ev.lhs += flux.g(std::clamp(s.values[i], -0.5 * U, 0.5 * U)) * (b - a);
        ev.moment += detail::moment_piece(a, b, s.values[i], U);
    }
    // rays beyond the breakpoints contribute only where s != s0
    if (s.breaks.front() > 0.0)
        ev.moment += U * 0.5 * s.breaks.front() * s.breaks.front();
    if (s.breaks.back() < 0.0)
        ev.moment += U * 0.5 * s.breaks.back() * s.breaks.back();
    if (ev.moment < -1e-12 * U * std::max(1.0, s.breaks.back() * s.breaks.back()))
        throw std::logic_error("evaluate_sides: negative moment (monotone invariant breached)");
    ev.moment = std::max(ev.moment, 0.0);
    ev.rhs = sharp_constant(flux) * std::sqrt(ev.moment);
    ev.ratio = (ev.rhs == 0.0) ? (ev.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                               : ev.lhs / ev.rhs;
    return ev;
}

// Seeded random profile: sorted breakpoints in [z_lo, z_hi], descending
// values in [-U/2, U/2]. Deterministic for a fixed seed.
inline MonotoneProfile random_monotone_profile(std::uint64_t seed, int count, double U,
                                               double z_lo = -2.0, double z_hi = 2.0) {
    if (count < 1) throw std::invalid_argument("random_monotone_profile: count must be >= 1");
    if (!(z_lo < z_hi)) throw std::invalid_argument("random_monotone_profile: empty z range");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uz(z_lo, z_hi);
    std::uniform_real_distribution<double> uv(-0.5 * U, 0.5 * U);
    MonotoneProfile p;
    p.U = U;
    p.breaks.resize(count + 1);
    p.values.resize(count);
    for (auto& b : p.breaks) b = uz(rng);
    std::sort(p.breaks.begin(), p.breaks.end());
    for (std::size_t i = 1; i < p.breaks.size(); ++i)  // enforce strict increase
        if (p.breaks[i] <= p.breaks[i - 1])
            p.breaks[i] = std::nextafter(p.breaks[i - 1], z_hi + 1.0);
    for (auto& v : p.values) v = uv(rng);
    std::sort(p.values.begin(), p.values.end(), std::greater<>());
    return p;
}

// Midpoint sampling of the optimal profile on n steps spanning the range
// of g'; the warm start for the sharpness search.
inline MonotoneProfile sample_optimal_profile(const FluxFunction& flux, int count) {
    if (count < 1) throw std::invalid_argument("sample_optimal_profile: count must be >= 1");
    const double z_lo = flux.g_prime(flux.hi());
    const double z_hi = flux.g_prime(flux.lo());
    MonotoneProfile p;
    p.U = flux.U;
    p.breaks.resize(count + 1);
    p.values.resize(count);
    const double h = (z_hi - z_lo) / count;
    for (int i = 0; i <= count; ++i) p.breaks[i] = z_lo + i * h;
    for (int i = 0; i < count; ++i)
        p.values[i] = optimal_profile(flux, z_lo + (i + 0.5) * h);
    for (int i = 1; i < count; ++i)  // bisection noise must not break monotonicity
        p.values[i] = std::min(p.values[i], p.values[i - 1]);
    return p;
}

struct RatioSearchResult {
    double best_ratio = 0.0;
    MonotoneProfile best_profile;
    long evaluations = 0;
};

// Stochastic hill-climbing over breakpoint/value perturbations, projected
// back onto the monotone feasible set; warm-started from the sampled
// optimal profile.
inline RatioSearchResult maximize_ratio(const FluxFunction& flux, int breakpoints,
                                        long budget, std::uint64_t seed) {
    if (budget < 0) throw std::invalid_argument("maximize_ratio: budget must be >= 0");
    RatioSearchResult res;
    res.best_profile = sample_optimal_profile(flux, std::max(breakpoints, 1));
    res.best_ratio = evaluate_sides(res.best_profile, flux).ratio;
    res.evaluations = 1;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_kind(0, 1);
    std::normal_distribution<double> bump(0.0, 1.0);
    const int n = res.best_profile.steps();
    std::uniform_int_distribution<int> pick_value(0, n - 1);
    std::uniform_int_distribution<int> pick_break(0, n);
    const double span = res.best_profile.breaks.back() - res.best_profile.breaks.front();

    MonotoneProfile trial = res.best_profile;
    for (long it = 0; it < budget; ++it) {
        trial = res.best_profile;
        const double scale = 0.2 * std::pow(0.999, static_cast<double>(it % 4000));
        if (pick_kind(rng) == 0) {
            const int i = pick_value(rng);
            double v = trial.values[i] + bump(rng) * scale * flux.U;
            const double lo = (i + 1 < n) ? trial.values[i + 1] : -0.5 * flux.U;
            const double hi = (i > 0) ? trial.values[i - 1] : 0.5 * flux.U;
            trial.values[i] = std::clamp(v, std::max(lo, -0.5 * flux.U),
                                         std::min(hi, 0.5 * flux.U));
        } else {
            const int i = pick_break(rng);
            double b = trial.breaks[i] + bump(rng) * scale * span / n;
            const double margin = 1e-9 * std::max(span, 1.0);
            const double lo = (i > 0) ? trial.breaks[i - 1] + margin : b;
            const double hi = (i + 1 <= n) ? trial.breaks[i + 1] - margin : b;
            if (i > 0 && i < n) b = std::clamp(b, lo, hi);
            else if (i == 0) b = std::min(b, trial.breaks[1] - margin);
            else b = std::max(b, trial.breaks[n - 1] + margin);
            trial.breaks[i] = b;
        }
        const double r = evaluate_sides(trial, flux).ratio;
        ++res.evaluations;
        if (r > res.best_ratio) {
            res.best_ratio = r;
            res.best_profile = trial;
        }
    }
    return res;
}

// L1 distance between a piecewise-constant profile and the optimal profile.
// Midpoint rule: the integrand has a kink or jump at every breakpoint, so a
// fixed fine partition is more robust than adaptive quadrature here.
inline double l1_distance_to_optimal(const MonotoneProfile& p, const FluxFunction& flux,
                                     int panels = 200000) {
    const double z_lo = std::min(p.breaks.front(), flux.g_prime(flux.hi()));
    const double z_hi = std::max(p.breaks.back(), flux.g_prime(flux.lo()));
    const double h = (z_hi - z_lo) / panels;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double z = z_lo + (i + 0.5) * h;
        acc += std::abs(p(z) - optimal_profile(flux, z));
    }
    return acc * h;
}

} // namespace mixlab

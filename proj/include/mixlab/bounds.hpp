#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixlab/diagnostics.hpp"

namespace mixlab {

// scale-invariant bound constants for l/(Ut), E/(U^2 t), D/(U^2 t)
inline constexpr double kWidthBound = 0.28867513459481287;       // 1/(2 sqrt 3)
inline constexpr double kEnergyBound = 1.0 / 12.0;
inline constexpr double kSeparationBound = 0.14433756729740643;  // 1/(4 sqrt 3)

enum class BoundQuantity { MixingWidth, RenormalizedEnergy, EnergySeparation };

inline const char* bound_quantity_name(BoundQuantity q) {
    switch (q) {
        case BoundQuantity::MixingWidth: return "l/(U t)";
        case BoundQuantity::RenormalizedEnergy: return "E/(U^2 t)";
        case BoundQuantity::EnergySeparation: return "D/(U^2 t)";
    }
    return "?";
}

struct BoundVerdict {
    std::string quantity;
    double observed = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    double margin = 0.0;  // bound + tolerance - observed
    bool pass = false;
    double window_lo = 0.0, window_hi = 0.0;
};

// The limsup is not observable; the estimator is the max of q(t)/(U^a t)
// over the trailing window [T (1 - tail_fraction), T].
inline double tail_ratio(const std::vector<DiagnosticsRecord>& series, BoundQuantity q,
                         double U, double tail_fraction = 0.5, double* window_lo = nullptr) {
    if (series.empty()) throw std::invalid_argument("tail_ratio: empty series");
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw std::invalid_argument("tail_ratio: tail fraction must lie in (0, 1]");
    const double T = series.back().t;
    if (!(T > 0.0)) throw std::invalid_argument("tail_ratio: series must span positive time");
    const double t_lo = T * (1.0 - tail_fraction);
    if (window_lo) *window_lo = t_lo;
    int in_window = 0;
    double worst = 0.0;
    for (const auto& r : series) {
        if (r.t < t_lo || r.t <= 0.0) continue;
        ++in_window;
        double ratio = 0.0;
        switch (q) {
            case BoundQuantity::MixingWidth: ratio = r.l / (U * r.t); break;
            case BoundQuantity::RenormalizedEnergy: ratio = r.E / (U * U * r.t); break;
            case BoundQuantity::EnergySeparation: ratio = r.D / (U * U * r.t); break;
        }
        worst = std::max(worst, ratio);
    }
    if (in_window < 10)
        throw std::invalid_argument("tail_ratio: fewer than 10 samples in the tail window");
    return worst;
}

struct VerdictTolerances {
    // defaults: 5% of each bound; the asymptotic statements are checked on a
    // finite window, so desk-scale runs can falsify but never confirm them
    double width = 0.05 * kWidthBound;
    double energy = 0.05 * kEnergyBound;
    double separation = 0.05 * kSeparationBound;
    double moment = 1e-6;  // max |m(t)| in units of U*H
    double tail_fraction = 0.5;
};

// Three tail-ratio verdicts plus conservation of the mixing-layer center.
inline std::vector<BoundVerdict> verify_theorem(const std::vector<DiagnosticsRecord>& series,
                                                double U, double H,
                                                const VerdictTolerances& tol = {}) {
    std::vector<BoundVerdict> out;
    const double T = series.empty() ? 0.0 : series.back().t;
    auto add = [&](BoundQuantity q, double bound, double tolerance) {
        BoundVerdict v;
        v.quantity = bound_quantity_name(q);
        v.bound = bound;
        v.tolerance = tolerance;
        v.observed = tail_ratio(series, q, U, tol.tail_fraction, &v.window_lo);
        v.window_hi = T;
        v.margin = bound + tolerance - v.observed;
        v.pass = v.observed <= bound + tolerance;
        out.push_back(v);
    };
    add(BoundQuantity::MixingWidth, kWidthBound, tol.width);
    add(BoundQuantity::RenormalizedEnergy, kEnergyBound, tol.energy);
    add(BoundQuantity::EnergySeparation, kSeparationBound, tol.separation);

    BoundVerdict m;
    m.quantity = "max |m(t)|";
    m.bound = 0.0;
    m.tolerance = tol.moment * U * H;
    for (const auto& r : series) m.observed = std::max(m.observed, std::abs(r.m));
    m.window_lo = series.empty() ? 0.0 : series.front().t;
    m.window_hi = T;
    m.margin = m.tolerance - m.observed;
    m.pass = m.observed <= m.tolerance;
    out.push_back(m);
    return out;
}

inline bool all_pass(const std::vector<BoundVerdict>& vs) {
    for (const auto& v : vs)
        if (!v.pass) return false;
    return true;
}

struct ScaleComparison {
    double max_diff_width = 0.0;
    double max_diff_energy = 0.0;
    double max_diff_separation = 0.0;
    int compared_samples = 0;
};

// Compares the scale-invariant ratios of two runs at matched rescaled times
// t' = t/L. The bounds are L-uniform, the values need not agree; only the
// differences are reported.
inline ScaleComparison scale_invariance_report(const std::vector<DiagnosticsRecord>& a,
                                               double La,
                                               const std::vector<DiagnosticsRecord>& b,
                                               double Lb, double U) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("scale_invariance_report: need two sampled series");
    ScaleComparison out;
    auto ratio3 = [&](const DiagnosticsRecord& r, double out3[3]) {
        out3[0] = r.l / (U * r.t);
        out3[1] = r.E / (U * U * r.t);
        out3[2] = r.D / (U * U * r.t);
    };
    const double blo = b.front().t / Lb, bhi = b.back().t / Lb;
    for (const auto& ra : a) {
        if (ra.t <= 0.0) continue;
        const double tp = ra.t / La;
        if (tp < blo || tp > bhi) continue;
        // locate the bracketing samples of b in rescaled time
        std::size_t hi = 1;
        while (hi < b.size() && b[hi].t / Lb < tp) ++hi;
        if (hi >= b.size()) continue;
        const auto& b0 = b[hi - 1];
        const auto& b1 = b[hi];
        const double t0 = b0.t / Lb, t1 = b1.t / Lb;
        const double w = (t1 > t0) ? (tp - t0) / (t1 - t0) : 0.0;
        if (b0.t <= 0.0) continue;
        double pa[3], p0[3], p1[3];
        ratio3(ra, pa);
        ratio3(b0, p0);
        ratio3(b1, p1);
        out.max_diff_width = std::max(out.max_diff_width,
                                      std::abs(pa[0] - ((1 - w) * p0[0] + w * p1[0])));
        out.max_diff_energy = std::max(out.max_diff_energy,
                                       std::abs(pa[1] - ((1 - w) * p0[1] + w * p1[1])));
        out.max_diff_separation = std::max(out.max_diff_separation,
                                           std::abs(pa[2] - ((1 - w) * p0[2] + w * p1[2])));
        ++out.compared_samples;
    }
    return out;
}

} // namespace mixlab

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mixlab/quadrature.hpp"

namespace mixlab {

// g(s) = (U^2/4 - s^2)/2 on [-U/2, U/2]: the flux whose entropy solution is
// the coarse-grained mixing profile, and the integrand of the width identity.
inline double flux_g(double s, double U) {
    if (std::abs(s) > 0.5 * U * (1.0 + 1e-12))
        throw std::domain_error("flux_g: |s| > U/2");
    return 0.5 * (0.25 * U * U - s * s);
}

inline double flux_g_prime(double s, double U) {
    if (std::abs(s) > 0.5 * U * (1.0 + 1e-12))
        throw std::domain_error("flux_g_prime: |s| > U/2");
    return -s;
}

// A concave flux on [-U/2, U/2] with derivative, plus the constants of its
// endpoint growth condition g(+-U/2 -+ eta) <= C eta^alpha, alpha > 1/2.
struct FluxFunction {
    std::function<double(double)> g;
    std::function<double(double)> g_prime;
    double U = 1.0;
    double growth_C = 1.0;
    double growth_alpha = 1.0;

    double lo() const { return -0.5 * U; }
    double hi() const { return 0.5 * U; }

    // Sampled invariants: concavity (g' non-increasing) and the endpoint
    // growth bound. Throws on violation.
    void validate(int samples = 257) const {
        if (!(U > 0.0)) throw std::invalid_argument("FluxFunction: U must be > 0");
        if (!(growth_alpha > 0.5))
            throw std::invalid_argument("FluxFunction: growth exponent must exceed 1/2");
        const double h = U / (samples - 1);
        double prev = g_prime(lo());
        for (int i = 1; i < samples; ++i) {
            const double gp = g_prime(lo() + i * h);
            if (gp > prev + 1e-12 * std::max(1.0, std::abs(prev)))
                throw std::invalid_argument("FluxFunction: g' increases (flux not concave)");
            prev = gp;
        }
        for (int i = 1; i < samples; ++i) {
            const double eta = 0.5 * U * i / (samples - 1);
            const double bound = growth_C * std::pow(eta, growth_alpha) + 1e-12;
            if (g(hi() - eta) > bound || g(lo() + eta) > bound)
                throw std::invalid_argument("FluxFunction: endpoint growth condition violated");
        }
    }
};

inline FluxFunction quadratic_flux(double U) {
    FluxFunction f;
    f.U = U;
    f.g = [U](double s) { return flux_g(s, U); };
    f.g_prime = [U](double s) { return flux_g_prime(s, U); };
    // g(U/2 - eta) = (U eta - eta^2)/2 <= (U/2) eta
    f.growth_C = 0.5 * U;
    f.growth_alpha = 1.0;
    return f;
}

// Entropy solution of the Riemann problem for the quadratic flux: uniform
// shear outside the fan, -z/t inside.
inline double rarefaction_profile(double z, double t, double U) {
    if (!(t > 0.0)) throw std::invalid_argument("rarefaction_profile: t must be > 0");
    const double edge = 0.5 * U * t;
    if (z <= -edge) return 0.5 * U;
    if (z >= edge) return -0.5 * U;
    return -z / t;
}

struct RarefactionReference {
    double U = 1.0;
    double t = 1.0;
    double l = 0.0;  // U t / sqrt(12)
    double E = 0.0;  // U^2 t / 12
    double D = 0.0;  // U^2 t / 24

    double profile(double z) const { return rarefaction_profile(z, t, U); }
};

inline RarefactionReference rarefaction_diagnostics(double t, double U) {
    if (!(t > 0.0)) throw std::invalid_argument("rarefaction_diagnostics: t must be > 0");
    RarefactionReference r;
    r.U = U;
    r.t = t;
    r.l = U * t / std::sqrt(12.0);
    r.E = U * U * t / 12.0;
    r.D = U * U * t / 24.0;
    return r;
}

// Optimal interpolation profile: the inverse of g' (clipped to the endpoint
// values outside its range), found by bisection. Requires strict concavity.
inline double optimal_profile(const FluxFunction& f, double z, double tol = 1e-12) {
    const double gp_at_hi = f.g_prime(f.hi());  // most negative value of g'
    const double gp_at_lo = f.g_prime(f.lo());  // most positive value of g'
    if (!(gp_at_lo > gp_at_hi))
        throw std::invalid_argument("optimal_profile: g' is not invertible");
    if (z <= gp_at_hi) return f.hi();
    if (z >= gp_at_lo) return f.lo();
    double a = f.lo(), b = f.hi();  // g'(a) >= z >= g'(b)
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (f.g_prime(mid) >= z)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

// Sharp constant (2 * int (g')^2 ds)^(1/2), by adaptive quadrature of the
// defining integral.
inline double sharp_constant(const FluxFunction& f, double rel_tol = 1e-11) {
    double scale = 0.0;
    for (int i = 0; i <= 16; ++i) {
        const double s = f.lo() + f.U * i / 16.0;
        scale = std::max(scale, f.g_prime(s) * f.g_prime(s));
    }
    const double abs_tol = std::max(scale * f.U, 1e-300) * rel_tol;
    const double integral = adaptive_simpson(
        [&f](double s) { const double gp = f.g_prime(s); return gp * gp; },
        f.lo(), f.hi(), abs_tol);
    if (!std::isfinite(integral))
        throw std::runtime_error("sharp_constant: integral not finite");
    return std::sqrt(2.0 * integral);
}

} // namespace mixlab

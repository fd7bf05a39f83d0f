#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mixlab {

// Thomas algorithm for a tridiagonal system with constant real coefficients
// (sub, diag, sup) on n unknowns. The RHS/solution may be strided (solver
// columns live inside row-major spectral arrays). No pivoting: every system
// assembled here is strictly diagonally dominant.
template <typename T>
void solve_tridiagonal_const(double sub, double diag, double sup, T* x,
                             std::ptrdiff_t stride, int n, std::vector<double>& cw,
                             std::vector<T>& dw) {
    if (n <= 0) throw std::invalid_argument("solve_tridiagonal_const: empty system");
    cw.resize(n);
    dw.resize(n);
    double beta = diag;
    if (beta == 0.0) throw std::runtime_error("tridiagonal: zero pivot");
    cw[0] = sup / beta;
    dw[0] = x[0] / beta;
    for (int i = 1; i < n; ++i) {
        beta = diag - sub * cw[i - 1];
        if (beta == 0.0) throw std::runtime_error("tridiagonal: zero pivot");
        cw[i] = sup / beta;
        dw[i] = (x[i * stride] - sub * dw[i - 1]) / beta;
    }
    x[(n - 1) * stride] = dw[n - 1];
    for (int i = n - 2; i >= 0; --i)
        x[i * stride] = dw[i] - cw[i] * x[(i + 1) * stride];
}

} // namespace mixlab

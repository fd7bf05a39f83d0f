#pragma once

#include <fftw3.h>

#include <complex>
#include <cstdlib>
#include <mutex>
#include <new>
#include <stdexcept>

namespace mixlab {

// 64-byte aligned buffer so FFTW row transforms keep a uniform alignment
// class (row strides below are kept multiples of 16 bytes).
template <typename T>
class AlignedBuffer {
public:
    AlignedBuffer() = default;
    explicit AlignedBuffer(std::size_t n) { allocate(n); }
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;
    AlignedBuffer(AlignedBuffer&& o) noexcept : p_(o.p_), n_(o.n_) { o.p_ = nullptr; o.n_ = 0; }
    AlignedBuffer& operator=(AlignedBuffer&& o) noexcept {
        if (this != &o) { release(); p_ = o.p_; n_ = o.n_; o.p_ = nullptr; o.n_ = 0; }
        return *this;
    }
    ~AlignedBuffer() { release(); }

    void allocate(std::size_t n) {
        release();
        n_ = n;
        if (n == 0) return;
        std::size_t bytes = (n * sizeof(T) + 63) / 64 * 64;
        p_ = static_cast<T*>(std::aligned_alloc(64, bytes));
        if (!p_) throw std::bad_alloc();
        for (std::size_t i = 0; i < n; ++i) p_[i] = T{};
    }
    void fill(T v) { for (std::size_t i = 0; i < n_; ++i) p_[i] = v; }

    T* data() { return p_; }
    const T* data() const { return p_; }
    T& operator[](std::size_t i) { return p_[i]; }
    const T& operator[](std::size_t i) const { return p_[i]; }
    std::size_t size() const { return n_; }

private:
    void release() { if (p_) { std::free(p_); p_ = nullptr; } }
    T* p_ = nullptr;
    std::size_t n_ = 0;
};

// One-dimensional real<->complex transforms of a y-row, normalized so the
// forward output holds true Fourier coefficients (mode 0 = row mean).
// Plans use FFTW_ESTIMATE only: plan choice, and hence roundoff, is then a
// deterministic function of the row length. execute_* are thread-safe on
// distinct rows (FFTW new-array interface); rows must be 16-byte aligned.
class RowFft {
public:
    explicit RowFft(int ny) : ny_(ny), nk_(ny / 2 + 1) {
        if (ny < 2 || ny % 2 != 0) throw std::invalid_argument("RowFft: ny must be even, >= 2");
        real_.allocate(static_cast<std::size_t>(ny_));
        spec_.allocate(static_cast<std::size_t>(nk_));
        // the FFTW planner is a process-wide singleton and not thread-safe;
        // plan execution is, so only creation/destruction take the lock
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_r2c_1d(ny_, real_.data(),
                                    reinterpret_cast<fftw_complex*>(spec_.data()),
                                    FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(ny_, reinterpret_cast<fftw_complex*>(spec_.data()),
                                    real_.data(), FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
        if (!fwd_ || !bwd_) throw std::runtime_error("RowFft: planning failed");
    }
    RowFft(const RowFft&) = delete;
    RowFft& operator=(const RowFft&) = delete;
    ~RowFft() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd_) fftw_destroy_plan(fwd_);
        if (bwd_) fftw_destroy_plan(bwd_);
    }

    int ny() const { return ny_; }
    int nk() const { return nk_; }

    // real row [ny] -> coefficients [nk], scaled by 1/ny
    void forward(const double* in, std::complex<double>* out) const {
        fftw_execute_dft_r2c(fwd_, const_cast<double*>(in),
                             reinterpret_cast<fftw_complex*>(out));
        const double s = 1.0 / ny_;
        for (int k = 0; k < nk_; ++k) out[k] *= s;
    }

    // coefficients [nk] -> real row [ny]; inverse of forward()
    void inverse(const std::complex<double>* in, double* out) const {
        fftw_execute_dft_c2r(bwd_, reinterpret_cast<fftw_complex*>(
                                        const_cast<std::complex<double>*>(in)),
                             out);
    }

private:
    static std::mutex& planner_mutex() {
        static std::mutex m;
        return m;
    }

    int ny_, nk_;
    AlignedBuffer<double> real_;
    AlignedBuffer<std::complex<double>> spec_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

} // namespace mixlab

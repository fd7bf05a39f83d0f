#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Named tolerances. Scales: positivity and boundary_* are relative to the
// field's own magnitude, circulation is relative to U, moment is in units of
// U*H, identity and interp_slack in units of U^2, shear_match and monotone in
// units of U, boundary_decay relative to the profile maximum.
struct Tolerances {
    double positivity = 1e-3;
    // circulation guards the mean-mode anchoring against grossly inconsistent
    // vorticity; the slow truncation bleed of a long run stays well below it
    // and is watched by boundary_contamination instead. The drift itself is
    // reported per run.
    double circulation = 1e-3;
    double moment = 1e-6;
    double identity = 1e-2;
    double interp_slack = 1e-8;
    double shear_match = 5e-2;
    double monotone = 1e-8;
    double boundary_decay = 1e-8;
    double boundary_contamination = 1e-3;

    void validate() const {
        auto chk = [](double v, const char* name) {
            if (!(v > 0.0))
                throw ConfigError(std::string("tolerances.") + name + ": must be > 0");
        };
        chk(positivity, "positivity");
        chk(circulation, "circulation");
        chk(moment, "moment");
        chk(identity, "identity");
        chk(interp_slack, "interp_slack");
        chk(shear_match, "shear_match");
        chk(monotone, "monotone");
        chk(boundary_decay, "boundary_decay");
        chk(boundary_contamination, "boundary_contamination");
    }
};

// Physical and numerical configuration. Viscosity is fixed to one; the
// channel width L doubles as the Reynolds parameter.
struct Params {
    double U = 8.0;   // velocity jump across the layer
    double L = 4.0;   // channel width
    double H = 8.0;   // vertical truncation half-height
    int Ny = 128;
    int Nz = 513;
    double dt = 0.0;  // fixed step when > 0, adaptive otherwise
    double cfl_number = 0.4;
    double T = 1.5;   // final time
    Tolerances tol;

    bool adaptive_dt() const { return dt <= 0.0; }

    void validate() const {
        if (!(U > 0.0)) throw ConfigError("params.U: must be > 0");
        if (!(L > 0.0)) throw ConfigError("params.L: must be > 0");
        if (!(H > 1.0)) throw ConfigError("params.H: must be > 1 (initial layer occupies |z| < 1)");
        if (Ny < 8) throw ConfigError("params.Ny: must be >= 8");
        if (Ny % 2 != 0) throw ConfigError("params.Ny: must be even");
        if (Nz < 8) throw ConfigError("params.Nz: must be >= 8");
        if (!(T > 0.0)) throw ConfigError("params.T: must be > 0");
        if (!(cfl_number > 0.0)) throw ConfigError("params.cfl_number: must be > 0");
        if (dt > 0.0 && !(dt <= T)) throw ConfigError("params.dt: must be <= T");
        tol.validate();
    }
};

// Uniform mesh: periodic in y on [0, L), node-inclusive in z on [-H, H],
// trapezoid weights in z.
class Grid {
public:
    Grid(double L, double H, int Ny, int Nz) : L_(L), H_(H), Ny_(Ny), Nz_(Nz) {
        if (!(L > 0.0) || !(H > 0.0) || Ny < 2 || Nz < 2 || Ny % 2 != 0)
            throw ConfigError("Grid: invalid extents or resolution");
        dy_ = L_ / Ny_;
        dz_ = 2.0 * H_ / (Nz_ - 1);
    }

    double L() const { return L_; }
    double H() const { return H_; }
    int ny() const { return Ny_; }
    int nz() const { return Nz_; }
    double dy() const { return dy_; }
    double dz() const { return dz_; }
    double y(int i) const { return i * dy_; }
    double z(int j) const { return -H_ + j * dz_; }
    // trapezoid quadrature weight in z
    double w(int j) const { return (j == 0 || j == Nz_ - 1) ? 0.5 * dz_ : dz_; }

private:
    double L_, H_;
    int Ny_, Nz_;
    double dy_, dz_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(const Params& p) {
    p.validate();
    return std::make_shared<Grid>(p.L, p.H, p.Ny, p.Nz);
}

// Real scalar field sampled at (y_i, z_j); stored z-major so y-rows are
// contiguous for the row transforms.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridPtr g, double fill = 0.0)
        : grid_(std::move(g)),
          v_(static_cast<std::size_t>(grid_->ny()) * grid_->nz(), fill) {}

    const Grid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }

    double& at(int iy, int iz) { return v_[static_cast<std::size_t>(iz) * grid_->ny() + iy]; }
    double at(int iy, int iz) const { return v_[static_cast<std::size_t>(iz) * grid_->ny() + iy]; }
    double* row(int iz) { return v_.data() + static_cast<std::size_t>(iz) * grid_->ny(); }
    const double* row(int iz) const { return v_.data() + static_cast<std::size_t>(iz) * grid_->ny(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    bool finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    template <typename Fn>
    void fill_with(Fn&& f) {
        for (int j = 0; j < grid_->nz(); ++j) {
            double* r = row(j);
            const double zj = grid_->z(j);
            for (int i = 0; i < grid_->ny(); ++i) r[i] = f(grid_->y(i), zj);
        }
    }

private:
    GridPtr grid_;
    std::vector<double> v_;
};

// One-dimensional function of z on the grid's z-nodes.
class Profile {
public:
    Profile() = default;
    explicit Profile(GridPtr g, double fill = 0.0)
        : grid_(std::move(g)), v_(grid_->nz(), fill) {}

    const Grid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    double& operator[](int j) { return v_[j]; }
    double operator[](int j) const { return v_[j]; }
    int size() const { return static_cast<int>(v_.size()); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    bool finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }

private:
    GridPtr grid_;
    std::vector<double> v_;
};

// (1/L) * integral over one period in y, exact for trigonometric polynomials
// below the Nyquist mode.
inline Profile horizontal_average(const ScalarField& f) {
    Profile p(f.grid_ptr());
    const int ny = f.grid().ny();
    for (int j = 0; j < f.grid().nz(); ++j) {
        const double* r = f.row(j);
        double acc = 0.0;
        for (int i = 0; i < ny; ++i) acc += r[i];
        p[j] = acc / ny;
    }
    return p;
}

// Trapezoid integral of a profile over [-H, H].
inline double profile_integral(const Profile& p) {
    double acc = 0.0;
    for (int j = 0; j < p.size(); ++j) acc += p.grid().w(j) * p[j];
    return acc;
}

// integral of z^power * p(z)
inline double profile_moment(const Profile& p, int power) {
    double acc = 0.0;
    for (int j = 0; j < p.size(); ++j)
        acc += p.grid().w(j) * std::pow(p.grid().z(j), power) * p[j];
    return acc;
}

// Ratio of the profile magnitude near z = +-H to its maximum; `inset` skips
// the Dirichlet-pinned boundary node itself.
inline double boundary_contamination(const Profile& p, int inset = 1) {
    const int n = p.size();
    if (n < 2 * (inset + 1)) return 0.0;
    const double scale = p.max_abs();
    if (scale == 0.0) return 0.0;
    const double edge = std::max(std::abs(p[inset]), std::abs(p[n - 1 - inset]));
    return edge / scale;
}

// integral over the truncated strip of the horizontal average of f.
// Boundary values of the averaged profile flag truncation contamination;
// the caller compares against Tolerances::boundary_decay.
struct NormalizedIntegral {
    double value = 0.0;
    double boundary_bottom = 0.0;
    double boundary_top = 0.0;
    bool decay_warning(double tol_rel, double scale) const {
        const double s = std::max(scale, 1e-300);
        return std::max(std::abs(boundary_bottom), std::abs(boundary_top)) > tol_rel * s;
    }
};

inline NormalizedIntegral normalized_integral_checked(const ScalarField& f) {
    Profile p = horizontal_average(f);
    NormalizedIntegral r;
    r.value = profile_integral(p);
    r.boundary_bottom = p[0];
    r.boundary_top = p[p.size() - 1];
    return r;
}

inline double normalized_integral(const ScalarField& f) {
    return normalized_integral_checked(f).value;
}

} // namespace mixlab

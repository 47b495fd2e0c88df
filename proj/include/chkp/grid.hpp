#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace chkp {

/// Periodic rectangular grid on [0,lx) x [0,ly).
/// Wavenumbers are xi_j = 2*pi*j/lx for j in {-nx/2,...,nx/2-1}, likewise eta_k.
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
        if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
            throw std::invalid_argument("Grid2D: nx, ny must be even and >= 8");
        if (!(lx > 0.0) || !(ly > 0.0))
            throw std::invalid_argument("Grid2D: lx, ly must be positive");
    }

    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }
    double x(int i) const { return i * dx(); }
    double y(int j) const { return j * dy(); }

    // signed mode number for storage index i in [0,n)
    static int mode(int i, int n) { return i < n / 2 ? i : i - n; }
    double xi(int i) const { return 2.0 * M_PI * mode(i, nx) / lx; }
    double eta(int j) const { return 2.0 * M_PI * mode(j, ny) / ly; }

    std::size_t size() const { return std::size_t(nx) * std::size_t(ny); }
    bool operator==(const Grid2D&) const = default;
};

/// Real scalar field sampled on a Grid2D, x-index fastest: v[iy*nx + ix].
class Field2D {
public:
    Field2D() = default;
    explicit Field2D(const Grid2D& g) : grid_(g), v_(g.size(), 0.0) {}
    Field2D(const Grid2D& g, std::vector<double> values) : grid_(g), v_(std::move(values)) {
        if (v_.size() != g.size()) throw std::invalid_argument("Field2D: value count mismatch");
    }

    const Grid2D& grid() const { return grid_; }
    double& operator()(int ix, int iy) { return v_[std::size_t(iy) * grid_.nx + ix]; }
    double operator()(int ix, int iy) const { return v_[std::size_t(iy) * grid_.nx + ix]; }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::size_t size() const { return v_.size(); }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

private:
    Grid2D grid_;
    std::vector<double> v_;
};

/// Complex Fourier coefficients of a Field2D, same layout (x-mode fastest),
/// unnormalized forward transform; the inverse carries 1/(nx*ny).
class SpectralField2D {
public:
    SpectralField2D() = default;
    explicit SpectralField2D(const Grid2D& g) : grid_(g), c_(g.size(), {0.0, 0.0}) {}

    const Grid2D& grid() const { return grid_; }
    std::complex<double>& operator()(int jx, int jy) { return c_[std::size_t(jy) * grid_.nx + jx]; }
    std::complex<double> operator()(int jx, int jy) const { return c_[std::size_t(jy) * grid_.nx + jx]; }
    std::complex<double>* data() { return c_.data(); }
    const std::complex<double>* data() const { return c_.data(); }
    std::size_t size() const { return c_.size(); }

private:
    Grid2D grid_;
    std::vector<std::complex<double>> c_;
};

inline void check_same_grid(const Field2D& a, const Field2D& b, const char* what) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

// elementwise helpers
Field2D operator+(const Field2D& a, const Field2D& b);
Field2D operator-(const Field2D& a, const Field2D& b);
Field2D operator*(double s, const Field2D& a);
Field2D operator*(const Field2D& a, const Field2D& b);
Field2D& operator+=(Field2D& a, const Field2D& b);
Field2D& operator-=(Field2D& a, const Field2D& b);
Field2D& operator*=(Field2D& a, double s);

/// Discrete L2 norm: sqrt( sum u^2 * dx * dy ).
double l2_norm(const Field2D& f);
/// L2 inner product with the same weighting.
double l2_inner(const Field2D& a, const Field2D& b);
double max_abs(const Field2D& f);
bool all_finite(const Field2D& f);

/// Largest per-row |x-mean| over all y rows.
double xmean_drift(const Field2D& f);
/// Admissible: zero x-mean on every y row, |mean| < 1e-12 * max|values|.
bool is_admissible(const Field2D& f, double rel_tol = 1e-12);
void require_admissible(const Field2D& f, const char* what);

}  // namespace chkp

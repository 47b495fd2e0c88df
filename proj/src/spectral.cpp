#include "chkp/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace chkp {

namespace {

// FFTW plan cache keyed by grid resolution. Plan creation is not thread-safe,
// so it is guarded; execution on caller-owned buffers via the new-array API is.
class FftEngine {
public:
    static FftEngine& get(int nx, int ny) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, FftEngine*> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(nx, ny);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, new FftEngine(nx, ny)).first;
        return *it->second;
    }

    void forward(std::complex<double>* buf) const {
        fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(buf), reinterpret_cast<fftw_complex*>(buf));
    }
    void backward(std::complex<double>* buf) const {
        fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(buf), reinterpret_cast<fftw_complex*>(buf));
    }

private:
    FftEngine(int nx, int ny) {
        std::vector<std::complex<double>> scratch(std::size_t(nx) * ny);
        auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
        // row-major (ny, nx): x is the fastest index
        fwd_ = fftw_plan_dft_2d(ny, nx, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(ny, nx, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_plan fwd_;
    fftw_plan bwd_;
};

// multiplier (i*xi)^p with the Nyquist mode zeroed for odd p
std::complex<double> dx_multiplier(double xi, bool nyquist, int p) {
    if (p == 0) return {1.0, 0.0};
    if (nyquist && p % 2 != 0) return {0.0, 0.0};
    std::complex<double> ix(0.0, xi);
    std::complex<double> m(1.0, 0.0);
    for (int q = 0; q < p; ++q) m *= ix;
    return m;
}

}  // namespace

SpectralField2D fft2(const Field2D& f) {
    const Grid2D& g = f.grid();
    SpectralField2D c(g);
    for (std::size_t i = 0; i < f.size(); ++i) c.data()[i] = f.data()[i];
    FftEngine::get(g.nx, g.ny).forward(c.data());
    return c;
}

Field2D ifft2(const SpectralField2D& c) {
    const Grid2D& g = c.grid();
    std::vector<std::complex<double>> buf(c.data(), c.data() + c.size());
    FftEngine::get(g.nx, g.ny).backward(buf.data());
    Field2D f(g);
    const double scale = 1.0 / double(g.size());
    for (std::size_t i = 0; i < buf.size(); ++i) f.data()[i] = buf[i].real() * scale;
    return f;
}

void deriv_inplace(SpectralField2D& c, int px, int py) {
    if (px < 0 || py < 0 || px + py > 4)
        throw std::invalid_argument("deriv: order must satisfy 0 <= px+py <= 4");
    const Grid2D& g = c.grid();
    for (int jy = 0; jy < g.ny; ++jy) {
        const bool ny_nyq = (jy == g.ny / 2);
        const std::complex<double> my = dx_multiplier(g.eta(jy), ny_nyq, py);
        for (int jx = 0; jx < g.nx; ++jx) {
            const bool nx_nyq = (jx == g.nx / 2);
            c(jx, jy) *= my * dx_multiplier(g.xi(jx), nx_nyq, px);
        }
    }
}

Field2D deriv(const Field2D& f, int px, int py) {
    if (!all_finite(f)) throw std::invalid_argument("deriv: field has non-finite entries");
    SpectralField2D c = fft2(f);
    deriv_inplace(c, px, py);
    return ifft2(c);
}

void apply_L_inplace(SpectralField2D& c) {
    const Grid2D& g = c.grid();
    for (int jy = 0; jy < g.ny; ++jy)
        for (int jx = 0; jx < g.nx; ++jx) {
            if (jx == g.nx / 2) {
                c(jx, jy) = 0.0;  // odd-order operator annihilates the Nyquist mode
                continue;
            }
            const double xi = g.xi(jx);
            c(jx, jy) *= std::complex<double>(0.0, xi * (1.0 + xi * xi));
        }
}

Field2D apply_L(const Field2D& f) {
    SpectralField2D c = fft2(f);
    apply_L_inplace(c);
    return ifft2(c);
}

void invert_L_inplace(SpectralField2D& c) {
    const Grid2D& g = c.grid();
    for (int jy = 0; jy < g.ny; ++jy)
        for (int jx = 0; jx < g.nx; ++jx) {
            if (jx == 0 || jx == g.nx / 2) {
                c(jx, jy) = 0.0;
                continue;
            }
            const double xi = g.xi(jx);
            c(jx, jy) /= std::complex<double>(0.0, xi * (1.0 + xi * xi));
        }
}

Field2D invert_L(const Field2D& f) {
    if (!is_admissible(f)) throw std::invalid_argument("invert_L: zero x-mode not in range of L");
    SpectralField2D c = fft2(f);
    invert_L_inplace(c);
    return ifft2(c);
}

void spectral_shift_inplace(SpectralField2D& c, double delta_x) {
    const Grid2D& g = c.grid();
    for (int jx = 0; jx < g.nx; ++jx) {
        const double xi = g.xi(jx);
        std::complex<double> ph = (jx == g.nx / 2)
                                      ? std::complex<double>(std::cos(xi * delta_x), 0.0)
                                      : std::exp(std::complex<double>(0.0, -xi * delta_x));
        for (int jy = 0; jy < g.ny; ++jy) c(jx, jy) *= ph;
    }
}

Field2D spectral_shift(const Field2D& f, double delta_x) {
    SpectralField2D c = fft2(f);
    spectral_shift_inplace(c, delta_x);
    return ifft2(c);
}

Field2D reflect(const Field2D& f, double lambda) {
    const Grid2D& g = f.grid();
    SpectralField2D c = fft2(f);
    SpectralField2D r(g);
    // f(2l-x,y): index flip j -> -j, then phase exp(-2 i xi_j l)
    for (int jy = 0; jy < g.ny; ++jy)
        for (int jx = 0; jx < g.nx; ++jx) {
            const int jflip = (g.nx - jx) % g.nx;
            const double xi = g.xi(jx);
            std::complex<double> ph = (jx == g.nx / 2)
                                          ? std::complex<double>(std::cos(2.0 * xi * lambda), 0.0)
                                          : std::exp(std::complex<double>(0.0, -2.0 * xi * lambda));
            r(jx, jy) = c(jflip, jy) * ph;
        }
    return ifft2(r);
}

void dealias_23(SpectralField2D& c) {
    const Grid2D& g = c.grid();
    const int jx_max = g.nx / 3;
    const int jy_max = g.ny / 3;
    for (int jy = 0; jy < g.ny; ++jy) {
        const int my = std::abs(Grid2D::mode(jy, g.ny));
        for (int jx = 0; jx < g.nx; ++jx) {
            const int mx = std::abs(Grid2D::mode(jx, g.nx));
            if (mx > jx_max || my > jy_max) c(jx, jy) = 0.0;
        }
    }
}

Field2D dealias_23(const Field2D& f) {
    SpectralField2D c = fft2(f);
    dealias_23(c);
    return ifft2(c);
}

void project_zero_xmean(Field2D& f) {
    const Grid2D& g = f.grid();
    for (int iy = 0; iy < g.ny; ++iy) {
        double m = 0.0;
        for (int ix = 0; ix < g.nx; ++ix) m += f(ix, iy);
        m /= g.nx;
        for (int ix = 0; ix < g.nx; ++ix) f(ix, iy) -= m;
    }
}

double h1_seminorm(const Field2D& f) {
    SpectralField2D c = fft2(f);
    const Grid2D& g = f.grid();
    double s = 0.0;
    for (int jy = 0; jy < g.ny; ++jy)
        for (int jx = 0; jx < g.nx; ++jx) {
            const double xi = g.xi(jx), eta = g.eta(jy);
            s += (xi * xi + eta * eta) * std::norm(c(jx, jy));
        }
    // Parseval: ||u||^2 = sum |c|^2 * dx * dy / (nx*ny)
    return std::sqrt(s * g.dx() * g.dy() / double(g.size()));
}

double eval_interpolant(const SpectralField2D& c, double x, double y) {
    const Grid2D& g = c.grid();
    std::complex<double> acc(0.0, 0.0);
    for (int jy = 0; jy < g.ny; ++jy) {
        const double eta = g.eta(jy);
        std::complex<double> ey = std::exp(std::complex<double>(0.0, eta * y));
        std::complex<double> row(0.0, 0.0);
        for (int jx = 0; jx < g.nx; ++jx) {
            const double xi = g.xi(jx);
            row += c(jx, jy) * std::exp(std::complex<double>(0.0, xi * x));
        }
        acc += row * ey;
    }
    return acc.real() / double(g.size());
}

}  // namespace chkp

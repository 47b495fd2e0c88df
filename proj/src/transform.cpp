#include "chkp/transform.hpp"

#include <algorithm>
#include <cmath>

#include "chkp/spectral.hpp"

namespace chkp {

namespace {

double fd_stencil(const std::vector<double>& f, int i, int n, double h, int order) {
    auto at = [&](int k) { return f[std::size_t((k % n + n) % n)]; };
    switch (order) {
        case 1:
            return (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12 * h);
        case 2:
            return (-at(i + 2) + 16 * at(i + 1) - 30 * at(i) + 16 * at(i - 1) - at(i - 2)) /
                   (12 * h * h);
        case 3:
            return (-at(i + 3) + 8 * at(i + 2) - 13 * at(i + 1) + 13 * at(i - 1) - 8 * at(i - 2) +
                    at(i - 3)) /
                   (8 * h * h * h);
        case 4:
            return (-at(i + 3) + 12 * at(i + 2) - 39 * at(i + 1) + 56 * at(i) - 39 * at(i - 1) +
                    12 * at(i - 2) - at(i - 3)) /
                   (6 * h * h * h * h);
        default:
            throw std::invalid_argument("fd_derivative: order 1..4");
    }
}

}  // namespace

void ScaleMap::validate() const {
    if (!(epsilon > 0.0) || !(gamma_phys > 0.0))
        throw std::invalid_argument("ScaleMap: epsilon and gamma must be positive");
}

Field2D fd_derivative(const Field2D& f, int px, int py) {
    const Grid2D& g = f.grid();
    Field2D r = f;
    if (px > 0) {
        std::vector<double> row(g.nx);
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) row[ix] = r(ix, iy);
            for (int ix = 0; ix < g.nx; ++ix) r(ix, iy) = fd_stencil(row, ix, g.nx, g.dx(), px);
        }
    }
    if (py > 0) {
        std::vector<double> col(g.ny);
        for (int ix = 0; ix < g.nx; ++ix) {
            for (int iy = 0; iy < g.ny; ++iy) col[iy] = r(ix, iy);
            for (int iy = 0; iy < g.ny; ++iy) r(ix, iy) = fd_stencil(col, iy, g.ny, g.dy(), py);
        }
    }
    return r;
}

SampledField from_normalized(const SampledField& normalized, const ScaleMap& m) {
    m.validate();
    const Grid2D& gn = normalized.grid;
    Grid2D gp(gn.nx, gn.ny, gn.lx / m.ax(), gn.ly / m.ay());

    SampledField phys;
    phys.grid = gp;
    for (std::size_t i = 0; i < normalized.frames.size(); ++i) {
        const double t_norm = normalized.times[i];
        phys.times.push_back(t_norm / m.at());
        // u_phys(x_j) = (eps/2) v(t', x_j' - sigma t') + b, a pure x-translation
        Field2D shifted = spectral_shift(normalized.frames[i], m.sigma() * t_norm);
        Field2D up(gp);
        const double amp = 0.5 * m.epsilon, b = m.background();
        for (std::size_t q = 0; q < up.size(); ++q) up.data()[q] = amp * shifted.data()[q] + b;
        phys.frames.push_back(std::move(up));
    }
    return phys;
}

SampledField to_normalized(const SampledField& physical, const ScaleMap& m) {
    m.validate();
    const Grid2D& gp = physical.grid;
    Grid2D gn(gp.nx, gp.ny, gp.lx * m.ax(), gp.ly * m.ay());

    SampledField norm;
    norm.grid = gn;
    const double amp = 2.0 / m.epsilon, b = m.background();
    for (std::size_t i = 0; i < physical.frames.size(); ++i) {
        const double t_norm = physical.times[i] * m.at();
        norm.times.push_back(t_norm);
        Field2D centered = physical.frames[i];
        for (std::size_t q = 0; q < centered.size(); ++q)
            centered.data()[q] = amp * (centered.data()[q] - b);
        // undo the Galilean translation (expressed on the physical lattice)
        Field2D vn(gn, spectral_shift(Field2D(gp, centered.values()), -m.sigma() * t_norm / m.ax())
                           .values());
        norm.frames.push_back(std::move(vn));
    }
    return norm;
}

SampledField resample_times(const SampledField& series, const std::vector<double>& new_times) {
    const std::size_t n = series.times.size();
    if (n < 4) throw std::invalid_argument("resample_times: need at least 4 frames for cubic stencils");

    SampledField out;
    out.grid = series.grid;
    for (double t : new_times) {
        // centered 4-point window t_{k-1} .. t_{k+2} around t
        std::size_t k = 1;
        while (k + 2 < n - 1 && series.times[k + 1] < t) ++k;
        if (t < series.times[k - 1] - 1e-12 || t > series.times[k + 2] + 1e-12)
            throw std::invalid_argument(
                "resample_times: requested time " + std::to_string(t) +
                " outside the sampled region [" + std::to_string(series.times[1]) + ", " +
                std::to_string(series.times[n - 2]) + "]");

        double w[4];
        const double* ts = &series.times[k - 1];
        for (int a = 0; a < 4; ++a) {
            w[a] = 1.0;
            for (int bq = 0; bq < 4; ++bq)
                if (bq != a) w[a] *= (t - ts[bq]) / (ts[a] - ts[bq]);
        }
        Field2D f(series.grid);
        for (int a = 0; a < 4; ++a) {
            const Field2D& frame = series.frames[k - 1 + a];
            for (std::size_t q = 0; q < f.size(); ++q) f.data()[q] += w[a] * frame.data()[q];
        }
        out.times.push_back(t);
        out.frames.push_back(std::move(f));
    }
    return out;
}

std::vector<Field2D> physical_residual_fd(const SampledField& phys, double epsilon,
                                          double gamma_phys) {
    const std::size_t n = phys.frames.size();
    if (n < 5) throw std::invalid_argument("physical_residual_fd: need at least 5 frames");
    const double dt = phys.times[1] - phys.times[0];
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(phys.times[i] - phys.times[i - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("physical_residual_fd: times must be uniformly spaced");

    std::vector<Field2D> residuals;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const Grid2D& g = phys.grid;
        // u_t by the 4th-order 5-frame stencil
        Field2D ut(g);
        for (std::size_t q = 0; q < ut.size(); ++q)
            ut.data()[q] = (-phys.frames[i + 2].data()[q] + 8 * phys.frames[i + 1].data()[q] -
                            8 * phys.frames[i - 1].data()[q] + phys.frames[i - 2].data()[q]) /
                           (12 * dt);
        const Field2D& u = phys.frames[i];

        Field2D u_x = fd_derivative(u, 1, 0);
        Field2D u_xx = fd_derivative(u, 2, 0);
        Field2D u_xxx = fd_derivative(u, 3, 0);
        Field2D u_xxxx = fd_derivative(u, 4, 0);
        Field2D u_yy = fd_derivative(u, 0, 2);
        Field2D u_xt = fd_derivative(ut, 1, 0);
        Field2D u_xxxt = fd_derivative(ut, 3, 0);

        Field2D uux(g), cross(g);
        for (std::size_t q = 0; q < uux.size(); ++q) {
            uux.data()[q] = u.data()[q] * u_x.data()[q];
            cross.data()[q] =
                2.0 * u_x.data()[q] * u_xx.data()[q] + u.data()[q] * u_xxx.data()[q];
        }
        Field2D uux_x = fd_derivative(uux, 1, 0);
        Field2D cross_x = fd_derivative(cross, 1, 0);

        Field2D r(g);
        const double c1 = 5.0 * gamma_phys / 12.0;
        const double c2 = 1.5 * epsilon;
        const double c3 = gamma_phys / 4.0;
        const double c4 = 5.0 * gamma_phys * epsilon / 24.0;
        const double c5 = 0.5 * epsilon * epsilon * epsilon;
        for (std::size_t q = 0; q < r.size(); ++q)
            r.data()[q] = u_xt.data()[q] - c1 * u_xxxt.data()[q] + u_xx.data()[q] +
                          c2 * uux_x.data()[q] - c3 * u_xxxx.data()[q] - c4 * cross_x.data()[q] +
                          c5 * u_yy.data()[q];
        residuals.push_back(std::move(r));
    }
    return residuals;
}

}  // namespace chkp

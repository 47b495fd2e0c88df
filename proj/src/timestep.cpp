#include "chkp/timestep.hpp"

#include <cmath>
#include <random>

#include "chkp/spectral.hpp"

namespace chkp {

namespace {

// nonlinear part of u_t in spectral space: -L^{-1} d/dx flux(u)
// (the quadratic terms only; linear dispersion lives in the phase factors)
SpectralField2D nonlinear_hat(const SpectralField2D& u_hat, const ModelParams& p) {
    const Grid2D& g = u_hat.grid();
    SpectralField2D uh = u_hat;
    dealias_23(uh);
    SpectralField2D u1h = uh, u2h = uh, u3h = uh;
    deriv_inplace(u1h, 1, 0);
    deriv_inplace(u2h, 2, 0);
    deriv_inplace(u3h, 3, 0);
    Field2D u0 = ifft2(uh), u1 = ifft2(u1h), u2 = ifft2(u2h), u3 = ifft2(u3h);

    const double a = 3.0;
    const double b = p.is_hcp() ? 2.0 * p.hcp().gamma : 2.0;
    const double d = p.is_hcp() ? p.hcp().gamma : 1.0;
    Field2D prod(g);
    for (std::size_t i = 0; i < prod.size(); ++i) {
        const double a0 = u0.data()[i], a1 = u1.data()[i], a2 = u2.data()[i], a3 = u3.data()[i];
        prod.data()[i] = a * a0 * a1 - b * a1 * a2 - d * a0 * a3;
    }
    SpectralField2D ph = fft2(prod);
    dealias_23(ph);
    deriv_inplace(ph, 1, 0);
    invert_L_inplace(ph);
    for (std::size_t i = 0; i < ph.size(); ++i) ph.data()[i] = -ph.data()[i];
    return ph;
}

void axpy(SpectralField2D& y, std::complex<double> a, const SpectralField2D& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] += a * x.data()[i];
}

}  // namespace

IfRk4::IfRk4(const Grid2D& grid, const ModelParams& params, double dt)
    : grid_(grid), params_(params), dt_(dt), e_half_(grid.size()), e_full_(grid.size()) {
    if (!(dt > 0.0)) throw std::invalid_argument("IfRk4: dt must be positive");
    if (params.is_chkp_physical())
        throw std::invalid_argument("IfRk4: physical-form evolution is handled by the scale map");
    for (int jy = 0; jy < grid.ny; ++jy)
        for (int jx = 0; jx < grid.nx; ++jx) {
            const std::size_t idx = std::size_t(jy) * grid.nx + jx;
            if (jx == 0 || jx == grid.nx / 2) {
                // zero x-modes are projected out; Nyquist carries no phase
                e_half_[idx] = e_full_[idx] = 1.0;
                continue;
            }
            const double om = linear_symbol(params, grid.xi(jx), grid.eta(jy));
            e_half_[idx] = std::exp(std::complex<double>(0.0, -om * dt / 2.0));
            e_full_[idx] = e_half_[idx] * e_half_[idx];
        }
}

double IfRk4::stable_dt_bound(const Field2D& u) {
    const double m = max_abs(u);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * u.grid().dx() / m;
}

void IfRk4::step_hat(SpectralField2D& u_hat, double t_now) const {
    const double h = dt_;
    const std::size_t n = u_hat.size();

    SpectralField2D n0 = nonlinear_hat(u_hat, params_);

    SpectralField2D s1 = u_hat;  // E*(u + h/2 N0)
    axpy(s1, 0.5 * h, n0);
    for (std::size_t i = 0; i < n; ++i) s1.data()[i] *= e_half_[i];
    SpectralField2D n1 = nonlinear_hat(s1, params_);

    SpectralField2D s2 = u_hat;  // E*u + h/2 N1
    for (std::size_t i = 0; i < n; ++i) s2.data()[i] *= e_half_[i];
    axpy(s2, 0.5 * h, n1);
    SpectralField2D n2 = nonlinear_hat(s2, params_);

    SpectralField2D s3 = u_hat;  // E2*u + h E*N2
    for (std::size_t i = 0; i < n; ++i)
        s3.data()[i] = e_full_[i] * u_hat.data()[i] + h * e_half_[i] * n2.data()[i];
    SpectralField2D n3 = nonlinear_hat(s3, params_);

    // u <- E2*u + h/6 (E2*N0 + 2E*(N1+N2) + N3)
    for (std::size_t i = 0; i < n; ++i) {
        u_hat.data()[i] = e_full_[i] * u_hat.data()[i] +
                          (h / 6.0) * (e_full_[i] * n0.data()[i] +
                                       2.0 * e_half_[i] * (n1.data()[i] + n2.data()[i]) + n3.data()[i]);
    }
    // re-project the zero x-modes
    const Grid2D& g = u_hat.grid();
    for (int jy = 0; jy < g.ny; ++jy) u_hat(0, jy) = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const auto& z = u_hat.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw BlowUpError(t_now + h, "blow-up detected at t=" + std::to_string(t_now + h));
    }
}

Field2D IfRk4::step(const Field2D& u) const {
    require_admissible(u, "IfRk4::step");
    SpectralField2D uh = fft2(u);
    step_hat(uh, 0.0);
    return ifft2(uh);
}

Field2D make_initial(const InitialSpec& spec, const Grid2D& grid) {
    Field2D u(grid);
    if (const auto* gau = std::get_if<InitialGaussian>(&spec)) {
        // periodicized Gaussian bump, x-symmetric about x0
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix) {
                double acc = 0.0;
                for (int px = -1; px <= 1; ++px)
                    for (int py = -1; py <= 1; ++py) {
                        const double ddx = grid.x(ix) - gau->x0 + px * grid.lx;
                        const double ddy = grid.y(iy) - gau->y0 + py * grid.ly;
                        acc += std::exp(-0.5 * (ddx * ddx / (gau->sigma_x * gau->sigma_x) +
                                                ddy * ddy / (gau->sigma_y * gau->sigma_y)));
                    }
                u(ix, iy) = gau->amplitude * acc;
            }
    } else if (const auto* m = std::get_if<InitialMode>(&spec)) {
        const double xi = 2.0 * M_PI * m->jx / grid.lx;
        const double eta = 2.0 * M_PI * m->ky / grid.ly;
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix)
                u(ix, iy) = m->amplitude * std::cos(xi * grid.x(ix) + eta * grid.y(iy));
    } else if (const auto* r = std::get_if<InitialRandom>(&spec)) {
        std::mt19937_64 rng(r->seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        SpectralField2D c(grid);
        for (int k = -r->kmax; k <= r->kmax; ++k)
            for (int j = 1; j <= r->jmax; ++j) {
                const int jx = (j + grid.nx) % grid.nx;
                const int jy = (k + grid.ny) % grid.ny;
                const std::complex<double> z(unif(rng), unif(rng));
                c(jx, jy) = z;
                c((grid.nx - jx) % grid.nx, (grid.ny - jy) % grid.ny) = std::conj(z);
            }
        Field2D base = ifft2(c);
        const double m0 = max_abs(base);
        u = (m0 > 0.0 ? r->amplitude / m0 : 0.0) * base;
    } else {
        throw std::invalid_argument("make_initial: file-based initial data is loaded by the CLI layer");
    }
    project_zero_xmean(u);
    return u;
}

SimulationResult simulate(const RunConfig& cfg,
                          const std::function<void(const Snapshot&, const DiagnosticsRow&)>& sink) {
    if (cfg.t_end < 0.0) throw std::invalid_argument("simulate: t_end must be >= 0");
    if (cfg.snapshot_every < 1) throw std::invalid_argument("simulate: snapshot_every must be >= 1");

    Field2D u = std::holds_alternative<InitialFile>(cfg.initial)
                    ? throw std::invalid_argument("simulate: resolve file initial data before calling")
                    : make_initial(cfg.initial, cfg.grid);

    SimulationResult res;
    auto record = [&](double t, const Field2D& f) {
        DiagnosticsRow row{t, l2_norm(f), h1_seminorm(f), max_abs(f), xmean_drift(f)};
        res.snapshots.push_back({t, f});
        res.diagnostics.push_back(row);
        if (sink) sink(res.snapshots.back(), row);
    };

    record(0.0, u);
    if (cfg.t_end == 0.0) return res;

    const long nsteps = std::lround(std::ceil(cfg.t_end / cfg.dt - 1e-12));
    IfRk4 stepper(cfg.grid, cfg.model, cfg.dt);
    SpectralField2D uh = fft2(u);
    for (long s = 0; s < nsteps; ++s) {
        // on blow-up the exception propagates; partial results have already
        // been delivered through the sink
        stepper.step_hat(uh, s * cfg.dt);
        const double t1 = (s + 1) * cfg.dt;
        if ((s + 1) % cfg.snapshot_every == 0 || s + 1 == nsteps) record(t1, ifft2(uh));
    }
    return res;
}

}  // namespace chkp

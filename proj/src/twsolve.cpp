#include "chkp/twsolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "chkp/spectral.hpp"

namespace chkp {

namespace {

// ---- composite vector (field values + speed component) --------------------

struct Vec {
    std::vector<double> v;
    explicit Vec(std::size_t n = 0) : v(n, 0.0) {}
};

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s;
}
double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

struct PinPoint {
    int ix = 0, iy = 0;
};

// Jacobian of tw_residual at (g, c) plus the pinning row. The derivative
// fields of g and the c column are cached once per Newton iterate; each
// matvec then costs one analysis/synthesis pair for the direction field.
// The spectral linear multipliers mirror the discrete operators inside
// tw_residual exactly (including the x-Nyquist annihilation of L d/dx), so
// Newton is consistent down to the solver tolerance.
class TwSystem {
public:
    TwSystem(const Field2D& g, double c, const ModelParams& p)
        : grid_(g.grid()), p_(p), c_(c), n_(g.size()) {
        SpectralField2D gh = fft2(g);
        dealias_23(gh);
        SpectralField2D g1h = gh, g2h = gh, g3h = gh;
        deriv_inplace(g1h, 1, 0);
        deriv_inplace(g2h, 2, 0);
        deriv_inplace(g3h, 3, 0);
        g0_ = ifft2(gh);
        g1_ = ifft2(g1h);
        g2_ = ifft2(g2h);
        g3_ = ifft2(g3h);
        if (p.is_hcp()) {
            fb_ = 2.0 * p.hcp().gamma;
            fd_ = p.hcp().gamma;
        }
        c_column_ = apply_L(deriv(g, 1, 0));
        for (std::size_t i = 0; i < n_; ++i) c_column_.data()[i] = -c_column_.data()[i];
    }

    std::size_t size() const { return n_ + 1; }

    Vec apply_jacobian(const Vec& x, const PinPoint& pin) const {
        Field2D v(grid_);
        std::copy(x.v.begin(), x.v.begin() + n_, v.data());
        const double dc = x.v[n_];

        SpectralField2D vh_full = fft2(v);
        SpectralField2D vh = vh_full;
        dealias_23(vh);
        SpectralField2D v1h = vh, v2h = vh, v3h = vh;
        deriv_inplace(v1h, 1, 0);
        deriv_inplace(v2h, 2, 0);
        deriv_inplace(v3h, 3, 0);
        Field2D v0 = ifft2(vh), v1 = ifft2(v1h), v2 = ifft2(v2h), v3 = ifft2(v3h);

        Field2D prod(grid_);
        for (std::size_t i = 0; i < n_; ++i) {
            const double a0 = g0_.data()[i], a1 = g1_.data()[i], a2 = g2_.data()[i], a3 = g3_.data()[i];
            const double b0 = v0.data()[i], b1 = v1.data()[i], b2 = v2.data()[i], b3 = v3.data()[i];
            prod.data()[i] =
                fa_ * (a0 * b1 + b0 * a1) - fb_ * (a1 * b2 + b1 * a2) - fd_ * (a0 * b3 + b0 * a3);
        }
        SpectralField2D rh = fft2(prod);
        dealias_23(rh);
        deriv_inplace(rh, 1, 0);

        for (int jy = 0; jy < grid_.ny; ++jy)
            for (int jx = 0; jx < grid_.nx; ++jx)
                rh(jx, jy) += linear_multiplier(jx, jy) * vh_full(jx, jy);

        // keep the operator inside the even, zero-x-mean subspace: FFT
        // roundoff leaks odd/mean components that the Krylov recombination
        // then amplifies into junk directions
        symmetrize_even(rh);

        Field2D jf = ifft2(rh);
        if (dc != 0.0)
            for (std::size_t i = 0; i < n_; ++i) jf.data()[i] += dc * c_column_.data()[i];

        Vec out(size());
        std::copy(jf.data(), jf.data() + n_, out.v.begin());
        out.v[n_] = v(pin.ix, pin.iy);
        return out;
    }

    Vec precondition(const Vec& x) const {
        Field2D v(grid_);
        std::copy(x.v.begin(), x.v.begin() + n_, v.data());
        SpectralField2D vh = fft2(v);
        double mmax = 0.0;
        for (int jy = 0; jy < grid_.ny; ++jy)
            for (int jx = 0; jx < grid_.nx; ++jx)
                mmax = std::max(mmax, std::abs(linear_multiplier(jx, jy)));
        const double floor_val = std::max(1e-10, 1e-6 * mmax);
        for (int jy = 0; jy < grid_.ny; ++jy)
            for (int jx = 0; jx < grid_.nx; ++jx) {
                double m = linear_multiplier(jx, jy);
                if (std::abs(m) < floor_val) m = (m >= 0.0 ? floor_val : -floor_val);
                vh(jx, jy) /= m;
            }
        Field2D pv = ifft2(vh);
        Vec out(size());
        std::copy(pv.data(), pv.data() + n_, out.v.begin());
        out.v[n_] = x.v[n_];
        return out;
    }

    static void project_even_admissible(Field2D& f) {
        Field2D r = reflect(f, 0.0);
        for (std::size_t i = 0; i < f.size(); ++i) f.data()[i] = 0.5 * (f.data()[i] + r.data()[i]);
        project_zero_xmean(f);
    }

    // spectral projection onto fields even in x about 0 with zero x-mean:
    // c(j,k) <- (c(j,k) + c(-j,k))/2, c(0,k) = 0
    static void symmetrize_even(SpectralField2D& c) {
        const Grid2D& g = c.grid();
        for (int jy = 0; jy < g.ny; ++jy) {
            c(0, jy) = 0.0;
            for (int jx = 1; jx <= g.nx / 2; ++jx) {
                const int jm = g.nx - jx;
                if (jm == jx) continue;
                const std::complex<double> avg = 0.5 * (c(jx, jy) + c(jm, jy));
                c(jx, jy) = avg;
                c(jm, jy) = avg;
            }
        }
    }

private:
    double linear_multiplier(int jx, int jy) const {
        const double xi = grid_.xi(jx), eta = grid_.eta(jy);
        // -c L d/dx annihilates the x-Nyquist mode, matching apply_L o deriv
        const double m_travel = (jx == grid_.nx / 2) ? 0.0 : c_ * xi * xi * (1.0 + xi * xi);
        if (p_.is_chkp()) return m_travel - p_.chkp().kappa * xi * xi - eta * eta;
        const auto& h = p_.hcp();
        return m_travel + h.alpha * eta * eta + h.beta * xi * xi * eta * eta;
    }

    Grid2D grid_;
    ModelParams p_;
    double c_;
    std::size_t n_;
    Field2D g0_, g1_, g2_, g3_;
    Field2D c_column_{};
    double fa_ = 3.0, fb_ = 2.0, fd_ = 1.0;
};

// ---- restarted GMRES with Givens rotations ---------------------------------

struct GmresResult {
    Vec x;
    double relres = 1.0;
    bool converged = false;
    bool breakdown = false;
};

template <class MatVec, class Precond>
GmresResult gmres(const MatVec& Amul, const Precond& Minv, const Vec& b, double rtol, int m,
                  int restarts) {
    GmresResult res;
    res.x = Vec(b.v.size());
    const double bnorm = norm(b);
    if (bnorm == 0.0) {
        res.converged = true;
        res.relres = 0.0;
        return res;
    }

    for (int cycle = 0; cycle < restarts && !res.converged && !res.breakdown; ++cycle) {
        Vec r = b;
        if (cycle > 0) {
            Vec ax = Amul(Minv(res.x));
            for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] -= ax.v[i];
        }
        const double beta = norm(r);
        if (beta / bnorm < rtol) {
            res.converged = true;
            res.relres = beta / bnorm;
            break;
        }

        std::vector<Vec> V;
        V.reserve(m + 1);
        Vec v0 = r;
        for (auto& e : v0.v) e /= beta;
        V.push_back(std::move(v0));

        std::vector<std::vector<double>> H(m + 1, std::vector<double>(m, 0.0));
        std::vector<double> cs(m, 0.0), sn(m, 0.0), s(m + 1, 0.0);
        s[0] = beta;
        int k = 0;
        for (; k < m; ++k) {
            Vec w = Amul(Minv(V[k]));
            const double wnorm0 = norm(w);
            for (int i = 0; i <= k; ++i) {
                H[i][k] = dot(w, V[i]);
                for (std::size_t q = 0; q < w.v.size(); ++q) w.v[q] -= H[i][k] * V[i].v[q];
            }
            // selective reorthogonalization: heavy cancellation leaves junk
            if (norm(w) < 0.7 * wnorm0) {
                for (int i = 0; i <= k; ++i) {
                    const double h2 = dot(w, V[i]);
                    H[i][k] += h2;
                    for (std::size_t q = 0; q < w.v.size(); ++q) w.v[q] -= h2 * V[i].v[q];
                }
            }
            H[k + 1][k] = norm(w);
            // the Krylov space is exhausted when the new direction is
            // numerically dependent on the basis (relative to its own size)
            bool lucky = H[k + 1][k] < 1e-10 * std::max(wnorm0, 1e-300);
            if (!lucky) {
                for (auto& e : w.v) e /= H[k + 1][k];
                V.push_back(std::move(w));
            }
            for (int i = 0; i < k; ++i) {
                const double t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
                H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
                H[i][k] = t;
            }
            const double denom = std::hypot(H[k][k], H[k + 1][k]);
            if (denom < 1e-300) {
                res.breakdown = true;
                ++k;
                break;
            }
            cs[k] = H[k][k] / denom;
            sn[k] = H[k + 1][k] / denom;
            H[k][k] = denom;
            H[k + 1][k] = 0.0;
            s[k + 1] = -sn[k] * s[k];
            s[k] = cs[k] * s[k];
            if (std::abs(s[k + 1]) / bnorm < rtol || lucky) {
                ++k;
                break;
            }
        }

        // rank-revealing truncation: once the Krylov space is numerically
        // exhausted the trailing triangular diagonal collapses and the
        // back-substitution would blow noise up into the solution
        double max_diag = 0.0;
        for (int i = 0; i < k; ++i) max_diag = std::max(max_diag, std::abs(H[i][i]));
        int kk = k;
        for (int i = 0; i < k; ++i)
            if (std::abs(H[i][i]) < 1e-10 * max_diag) {
                kk = i;
                break;
            }
        std::vector<double> y(kk, 0.0);
        for (int i = kk - 1; i >= 0; --i) {
            double t = s[i];
            for (int j = i + 1; j < kk; ++j) t -= H[i][j] * y[j];
            y[i] = t / H[i][i];
        }
        for (int i = 0; i < kk; ++i)
            for (std::size_t q = 0; q < res.x.v.size(); ++q) res.x.v[q] += y[i] * V[i].v[q];

        res.relres = std::abs(s[kk]) / bnorm;
        if (res.relres < rtol) res.converged = true;
    }
    res.x = Minv(res.x);
    return res;
}

}  // namespace

double linear_wave_speed(const ModelParams& p, const Grid2D& grid) {
    const double xi1 = 2.0 * M_PI / grid.lx;
    return linear_symbol(p, xi1, 0.0) / xi1;
}

Field2D cosine_seed(const Grid2D& grid, double amplitude) {
    Field2D g(grid);
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            g(ix, iy) = amplitude * std::cos(2.0 * M_PI * grid.x(ix) / grid.lx);
    return g;
}

TravelingWave solve_tw(const Field2D& seed, double c0, const ModelParams& p, double tol,
                       const TwSolveOptions& opts) {
    const Grid2D grid = seed.grid();
    const PinPoint pin{0, grid.ny / 2};

    Field2D g = seed;
    TwSystem::project_even_admissible(g);
    const double A = g(pin.ix, pin.iy);
    if (std::abs(A) < 1e-13)
        throw TwSolveError("solve_tw: pinned amplitude is zero; the trivial branch is degenerate", 0.0);

    double c = c0;
    const std::size_t n = g.size();
    double last_sup = std::numeric_limits<double>::infinity();

    for (int it = 0; it < opts.max_newton; ++it) {
        Field2D F = tw_residual(g, c, p);
        const double sup = max_abs(F);
        last_sup = sup;
        if (sup <= tol) return TravelingWave{g, c, p, sup};

        TwSystem sys(g, c, p);
        TwSystem::project_even_admissible(F);  // discard parity noise in the rhs
        Vec rhs(n + 1);
        for (std::size_t i = 0; i < n; ++i) rhs.v[i] = -F.data()[i];
        rhs.v[n] = A - g(pin.ix, pin.iy);

        const double forcing = std::clamp(0.1 * sup, 1e-10, 1e-3);
        auto matvec = [&](const Vec& x) { return sys.apply_jacobian(x, pin); };
        auto precond = [&](const Vec& x) { return sys.precondition(x); };
        GmresResult lin = gmres(matvec, precond, rhs, forcing, opts.gmres_m, opts.gmres_restarts);
        if (opts.trace)
            std::fprintf(stderr, "newton %2d: |F|=%.3e c=%.8f gmres relres=%.2e\n", it, sup, c,
                         lin.relres);
        if (lin.relres > 0.5)
            throw TwSolveError(
                "solve_tw: Jacobian solve stagnated (near-singular Jacobian); try a different "
                "amplitude A",
                sup);

        // monotone damping: never accept a step that worsens the residual
        // (a near-singular Jacobian can hand back an arbitrarily bad step)
        double step = 1.0;
        double best_sup = std::numeric_limits<double>::infinity();
        Field2D best_g;
        double best_c = c;
        bool accepted = false;
        for (int half = 0; half < 9; ++half) {
            Field2D g_try = g;
            for (std::size_t i = 0; i < n; ++i) g_try.data()[i] += step * lin.x.v[i];
            TwSystem::project_even_admissible(g_try);
            const double c_try = c + step * lin.x.v[n];
            const double sup_try = max_abs(tw_residual(g_try, c_try, p));
            if (opts.trace)
                std::fprintf(stderr, "   damp step=%.4f |F_try|=%.4e dc=%.3e\n", step, sup_try,
                             step * lin.x.v[n]);
            if (sup_try < best_sup) {
                best_sup = sup_try;
                best_g = g_try;
                best_c = c_try;
            }
            if (sup_try < 0.9 * sup) {
                g = std::move(g_try);
                c = c_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // End-game residuals bounce: progress near the evaluation floor
            // is not monotone, so below the dance threshold the best try is
            // taken as is. Far from convergence a residual explosion means
            // the step was junk from a near-singular system.
            const double dance = std::max(1e3 * tol, 1e-6);
            if (sup <= dance || best_sup < 100.0 * sup) {
                g = std::move(best_g);
                c = best_c;
            } else {
                throw TwSolveError(
                    "solve_tw: stalled (no damped step improves the residual); last residual = " +
                        std::to_string(sup),
                    sup);
            }
        }
    }
    throw TwSolveError("solve_tw: no convergence within max iterations; last residual = " +
                           std::to_string(last_sup),
                       last_sup);
}

namespace {

// one continuation hop with recursive midpoint insertion: a delicate stretch
// of the branch is crossed in sub-steps that are not emitted
bool continuation_hop(const TravelingWave& from, double A_target, double tol,
                      const TwSolveOptions& opts, int depth, TravelingWave& out) {
    const PinPoint pin{0, from.profile.grid().ny / 2};
    const double A_from = from.profile(pin.ix, pin.iy);
    if (std::abs(A_from) < 1e-13) return false;
    Field2D seed = (A_target / A_from) * from.profile;
    try {
        out = solve_tw(seed, from.speed, from.model, tol, opts);
        return true;
    } catch (const TwSolveError&) {
        if (depth >= 3) return false;
        TravelingWave mid{Field2D(from.profile.grid()), 0.0, from.model, 0.0};
        if (!continuation_hop(from, 0.5 * (A_from + A_target), tol, opts, depth + 1, mid))
            return false;
        return continuation_hop(mid, A_target, tol, opts, depth + 1, out);
    }
}

}  // namespace

std::vector<TravelingWave> continue_branch(const TravelingWave& start, double dA, int n, double tol,
                                           const TwSolveOptions& opts) {
    std::vector<TravelingWave> branch{start};
    if (n <= 0) return branch;

    const Grid2D& grid = start.profile.grid();
    const PinPoint pin{0, grid.ny / 2};
    for (int s = 0; s < n; ++s) {
        const TravelingWave& prev = branch.back();
        const double A_prev = prev.profile(pin.ix, pin.iy);
        const double A_next = A_prev + dA;
        if (std::abs(A_prev) < 1e-13 || std::abs(A_next) < 1e-13) break;
        TravelingWave next{Field2D(grid), 0.0, prev.model, 0.0};
        if (!continuation_hop(prev, A_next, tol, opts, 0, next)) break;  // partial branch is valid
        branch.push_back(std::move(next));
    }
    return branch;
}

}  // namespace chkp

#include "chkp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "chkp/spectral.hpp"

namespace chkp {

namespace {

constexpr double kGolden = 0.6180339887498949;

// golden-section minimizer of a unimodal function on [a,b]
template <class F>
double golden_min(F&& f, double a, double b, double xtol) {
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Collapsed coefficients for the reflection defect:
//   ||u - R_lambda u||^2 = 2||c||^2 - 2 Re sum_j A_j e^{-2 i xi_j lambda}
// with A_j = sum_k conj(c(j,k)) c(-j,k); O(nx) per lambda after O(N) setup.
struct AxisScanner {
    explicit AxisScanner(const Field2D& u) : grid(u.grid()) {
        SpectralField2D c = fft2(u);
        total = 0.0;
        A.assign(grid.nx, {0.0, 0.0});
        for (int jy = 0; jy < grid.ny; ++jy)
            for (int jx = 0; jx < grid.nx; ++jx) {
                total += std::norm(c(jx, jy));
                A[jx] += std::conj(c(jx, jy)) * c((grid.nx - jx) % grid.nx, jy);
            }
        norm2 = total;
    }

    // squared defect via the collapsed form; cheap but loses accuracy to
    // cancellation once the defect drops below ~1e-16 * norm2 (scan use only)
    double defect2(double lambda) const {
        double s = 0.0;
        for (int jx = 0; jx < grid.nx; ++jx)
            s += (A[jx] * std::exp(std::complex<double>(0.0, -2.0 * grid.xi(jx) * lambda))).real();
        return std::max(0.0, 2.0 * norm2 - 2.0 * s);
    }

    Grid2D grid;
    std::vector<std::complex<double>> A;
    double total = 0.0;
    double norm2 = 0.0;
};

// cancellation-free squared defect sum |c(j,k) - c(-j,k) e^{-2 i xi lambda}|^2,
// O(N) per lambda; resolves perfect symmetry down to roundoff
struct AxisRefiner {
    explicit AxisRefiner(const Field2D& u) : grid(u.grid()), c(fft2(u)) {}
    double defect2(double lambda) const {
        double s = 0.0;
        for (int jy = 0; jy < grid.ny; ++jy)
            for (int jx = 0; jx < grid.nx; ++jx) {
                const std::complex<double> ph =
                    std::exp(std::complex<double>(0.0, -2.0 * grid.xi(jx) * lambda));
                s += std::norm(c(jx, jy) - c((grid.nx - jx) % grid.nx, jy) * ph);
            }
        return s;
    }
    Grid2D grid;
    SpectralField2D c;
};

// affine (and quadratic) least-squares fit of unwrapped samples
struct PolyFit {
    double slope = 0.0, curvature = 0.0;
};

PolyFit fit_quadratic(const std::vector<std::pair<double, double>>& pts) {
    // least squares for a + b t + c t^2 via normal equations
    const std::size_t n = pts.size();
    if (n < 3) {
        PolyFit f;
        if (n == 2)
            f.slope = (pts[1].second - pts[0].second) / (pts[1].first - pts[0].first);
        return f;
    }
    double s0 = n, s1 = 0, s2 = 0, s3 = 0, s4 = 0, r0 = 0, r1 = 0, r2 = 0;
    for (auto [t, v] : pts) {
        const double t2 = t * t;
        s1 += t;
        s2 += t2;
        s3 += t2 * t;
        s4 += t2 * t2;
        r0 += v;
        r1 += v * t;
        r2 += v * t2;
    }
    // solve the 3x3 system by Cramer
    auto det3 = [](double a, double b, double c, double d, double e, double f, double g, double h,
                   double i) { return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g); };
    const double D = det3(s0, s1, s2, s1, s2, s3, s2, s3, s4);
    if (std::abs(D) < 1e-300) return {};
    PolyFit f;
    f.slope = det3(s0, r0, s2, s1, r1, s3, s2, r2, s4) / D;
    f.curvature = det3(s0, s1, r0, s1, s2, r1, s2, s3, r2) / D;
    return f;
}

}  // namespace

double asymmetry(const Field2D& u, double lambda) {
    const double n = l2_norm(u);
    if (n == 0.0) throw std::invalid_argument("asymmetry: symmetry undefined for zero field");
    return l2_norm(u - reflect(u, lambda)) / n;
}

std::pair<double, double> find_axis(const Field2D& u) {
    const double n = l2_norm(u);
    if (n == 0.0) throw std::invalid_argument("find_axis: symmetry undefined for zero field");
    const Grid2D& g = u.grid();
    AxisScanner scan(u);

    // nx candidates covering the fundamental domain [0, lx/2)
    const double span = 0.5 * g.lx;
    const double step = span / g.nx;
    double best_lambda = 0.0;
    double best = scan.defect2(0.0);
    for (int i = 1; i < g.nx; ++i) {
        const double lam = i * step;
        const double d = scan.defect2(lam);
        if (d < best * (1.0 - 1e-12)) {  // strict improvement; ties keep the smaller lambda
            best = d;
            best_lambda = lam;
        }
    }
    const double a = best_lambda - step;
    const double b = best_lambda + step;
    AxisRefiner fine(u);
    double lam = golden_min([&](double x) { return fine.defect2(x); }, a, b, 1e-12);
    if (lam < 0.0) lam += span;
    // exact final score through the public reflection
    double score = asymmetry(u, lam);
    // an x-independent (or otherwise fully degenerate) minimum: tie-break to 0
    if (scan.defect2(0.0) <= best + 1e-14 * scan.norm2 && asymmetry(u, 0.0) <= score) {
        lam = 0.0;
        score = asymmetry(u, 0.0);
    }
    return {lam, score};
}

double estimate_speed(const Snapshot& s1, const Snapshot& s2) {
    if (!(s2.t > s1.t)) throw std::invalid_argument("estimate_speed: snapshots must be time-ordered");
    if (l2_norm(s1.field) == 0.0 || l2_norm(s2.field) == 0.0)
        throw std::invalid_argument("estimate_speed: speed undefined for zero fields");
    check_same_grid(s1.field, s2.field, "estimate_speed");
    const Grid2D& g = s1.field.grid();

    SpectralField2D c1 = fft2(s1.field), c2 = fft2(s2.field);
    // collapse y: z_j = sum_k c2(j,k) conj(c1(j,k)); C(delta) = sum_j Re z_j e^{i xi_j delta}
    std::vector<std::complex<double>> z(g.nx, {0.0, 0.0});
    double xvar = 0.0, total = 0.0;
    for (int jy = 0; jy < g.ny; ++jy)
        for (int jx = 0; jx < g.nx; ++jx) {
            z[jx] += c2(jx, jy) * std::conj(c1(jx, jy));
            total += std::norm(c1(jx, jy));
            if (jx != 0) xvar += std::norm(c1(jx, jy));
        }
    if (xvar <= 1e-24 * total) throw std::invalid_argument("estimate_speed: speed undefined");

    // first-x-harmonic phase seed
    const std::complex<double> z1 = z[1];
    if (std::abs(z1) == 0.0) throw std::invalid_argument("estimate_speed: speed undefined");
    const double xi1 = g.xi(1);
    double delta0 = -std::arg(z1) / xi1;

    auto corr = [&](double d) {
        double s = 0.0;
        for (int jx = 0; jx < g.nx; ++jx)
            s += (z[jx] * std::exp(std::complex<double>(0.0, g.xi(jx) * d))).real();
        return -s;  // minimized
    };
    const double w = g.dx();
    double delta = golden_min(corr, delta0 - w, delta0 + w, 1e-8 * g.lx);
    // Newton polish on C'(delta) = 0; golden section alone stalls in the
    // flat quadratic cap where function differences sink below roundoff
    for (int it = 0; it < 40; ++it) {
        double d1 = 0.0, d2 = 0.0;
        for (int jx = 0; jx < g.nx; ++jx) {
            const double xi = g.xi(jx);
            const std::complex<double> e = z[jx] * std::exp(std::complex<double>(0.0, xi * delta));
            d1 += -xi * e.imag();
            d2 += -xi * xi * e.real();
        }
        if (d2 >= 0.0) break;  // not a maximum cap; keep the golden result
        const double step = d1 / d2;
        delta -= step;
        if (std::abs(step) < 1e-15 * g.lx) break;
    }
    // report on the branch nearest zero
    while (delta > 0.5 * g.lx) delta -= g.lx;
    while (delta <= -0.5 * g.lx) delta += g.lx;
    return delta / (s2.t - s1.t);
}

SteadinessReport steadiness_report(const std::vector<Snapshot>& series, double steady_threshold) {
    if (series.size() < 3) throw std::invalid_argument("steadiness_report: need at least 3 snapshots");
    SteadinessReport rep;
    rep.steady_threshold = steady_threshold;

    const Grid2D& g = series.front().field.grid();
    bool wrap_risk = false;
    double total_shift = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double dt = series[i].t - series[i - 1].t;
        const double v = estimate_speed(series[i - 1], series[i]);
        const double shift = v * dt;
        if (std::abs(shift) > 0.25 * g.lx) wrap_risk = true;
        total_shift += shift;
    }
    rep.speed_estimate = total_shift / (series.back().t - series.front().t);

    const Field2D& u0 = series.front().field;
    const double n0 = l2_norm(u0);
    for (const auto& s : series) {
        const double err = l2_norm(s.field - spectral_shift(u0, rep.speed_estimate * (s.t - series.front().t))) / n0;
        rep.shape_error_of_t.emplace_back(s.t, err);
        rep.max_shape_error = std::max(rep.max_shape_error, err);
    }
    rep.verdict = wrap_risk ? "inconclusive"
                            : (rep.max_shape_error < steady_threshold ? "steady" : "not-steady");
    return rep;
}

SymmetryReport symmetry_report(const std::vector<Snapshot>& series, double symmetric_threshold) {
    if (series.empty()) throw std::invalid_argument("symmetry_report: empty series");
    SymmetryReport rep;
    rep.symmetric_threshold = symmetric_threshold;
    const double half = 0.5 * series.front().field.grid().lx;

    std::vector<std::pair<double, double>> unwrapped;
    for (const auto& s : series) {
        auto [lam, score] = find_axis(s.field);
        rep.lambda_of_t.emplace_back(s.t, lam);
        rep.asymmetry_of_t.emplace_back(s.t, score);
        // unwrap across the lx/2 period for the fit
        double lu = lam;
        if (!unwrapped.empty()) {
            const double prev = unwrapped.back().second;
            lu += half * std::round((prev - lu) / half);
        }
        unwrapped.emplace_back(s.t, lu);
    }
    PolyFit fit = fit_quadratic(unwrapped);
    rep.lambda_dot_estimate = fit.slope;
    rep.lambda_curvature = fit.curvature;
    return rep;
}

}  // namespace chkp

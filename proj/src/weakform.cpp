#include "chkp/weakform.hpp"

#include <algorithm>
#include <cmath>

namespace chkp {

namespace {

double pow_int(double b, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= b;
    return r;
}

double factor_derivative(const SeparableField3::Factor& f, int k, double s) {
    if (const auto* h = std::get_if<SeparableField3::Hat>(&f)) {
        const double z = (s - h->center) / h->radius;
        return bump_jet(z).derivative(k) / pow_int(h->radius, k);
    }
    if (const auto* g = std::get_if<SeparableField3::Gauss>(&f)) {
        const double z = (s - g->center) / g->sigma;
        return gaussian_jet(z).derivative(k) / pow_int(g->sigma, k);
    }
    const auto& w = std::get<SeparableField3::Wave>(f);
    return pow_int(w.freq, k) * std::cos(w.freq * s + w.phase + k * M_PI_2);
}

// initial boxes in sheared coordinates (first axis -> zeta), split at the ridge
std::vector<Box2> sheared_boxes(const Box2& supp_xy, const RidgePlane& r) {
    const double ty_lo = std::min(r.theta * supp_xy.lo[1], r.theta * supp_xy.hi[1]);
    const double ty_hi = std::max(r.theta * supp_xy.lo[1], r.theta * supp_xy.hi[1]);
    Box2 b;
    b.lo[0] = supp_xy.lo[0] + ty_lo - r.offset;
    b.hi[0] = supp_xy.hi[0] + ty_hi - r.offset;
    b.lo[1] = supp_xy.lo[1];
    b.hi[1] = supp_xy.hi[1];
    if (b.lo[0] < 0.0 && b.hi[0] > 0.0) {
        Box2 l = b, rr = b;
        l.hi[0] = 0.0;
        rr.lo[0] = 0.0;
        return {l, rr};
    }
    return {b};
}

std::vector<Box3> sheared_boxes(const Box3& supp_txy, const RidgePlane& r) {
    const double ty_lo = std::min(r.theta * supp_txy.lo[2], r.theta * supp_txy.hi[2]);
    const double ty_hi = std::max(r.theta * supp_txy.lo[2], r.theta * supp_txy.hi[2]);
    const double ct_lo = std::min(-r.speed * supp_txy.lo[0], -r.speed * supp_txy.hi[0]);
    const double ct_hi = std::max(-r.speed * supp_txy.lo[0], -r.speed * supp_txy.hi[0]);
    Box3 b;
    b.lo[0] = supp_txy.lo[0];
    b.hi[0] = supp_txy.hi[0];
    b.lo[1] = supp_txy.lo[1] + ty_lo + ct_lo - r.offset;
    b.hi[1] = supp_txy.hi[1] + ty_hi + ct_hi - r.offset;
    b.lo[2] = supp_txy.lo[2];
    b.hi[2] = supp_txy.hi[2];
    if (b.lo[1] < 0.0 && b.hi[1] > 0.0) {
        Box3 l = b, rr = b;
        l.hi[1] = 0.0;
        rr.lo[1] = 0.0;
        return {l, rr};
    }
    return {b};
}

struct EvolutionCoeffs {
    double kappa = 0.0;   // multiplies u * phi_xx
    double quad_xx = 0.0;  // multiplies u^2 * phi_xx  (3/2 or 3/2)
    double grad_xx = 0.0;  // multiplies u_x^2 * phi_xx (1/2 or gamma/2)
    double quad_x4 = 0.0;  // multiplies u^2 * phi_xxxx (1/2 or gamma/2)
    double yy = 0.0;       // multiplies u * phi_yy (+1 or -alpha)
    double xxyy = 0.0;     // multiplies u * phi_xxyy (0 or +beta)
};

EvolutionCoeffs chkp_coeffs(double kappa) { return {kappa, 1.5, 0.5, 0.5, 1.0, 0.0}; }
EvolutionCoeffs hcp_coeffs(double alpha, double beta, double gamma) {
    return {0.0, 1.5, 0.5 * gamma, 0.5 * gamma, -alpha, beta};
}

WeakResidual evolution_weak(const WeakField3& u, const TestFunction3& phi, const EvolutionCoeffs& co,
                            const QuadratureOptions& opts) {
    auto integrand_xyz = [&](double t, double x, double y) {
        const Partials3 p = phi.partials(t, x, y);
        const double uv = u.value(t, x, y);
        const double ux = u.x_derivative(t, x, y);
        double s = uv * (p.tx - p.txxx) +
                   (co.kappa * uv + co.quad_xx * uv * uv + co.grad_xx * ux * ux) * p.xx -
                   co.quad_x4 * uv * uv * p.xxxx + co.yy * uv * p.yy;
        if (co.xxyy != 0.0) s += co.xxyy * uv * p.xxyy;
        return s;
    };

    const Box3 supp = phi.support();
    QuadratureResult q;
    if (auto r = u.ridge()) {
        auto boxes = sheared_boxes(supp, *r);
        auto g = [&](double t, double zeta, double y) {
            const double x = zeta - r->theta * y + r->speed * t + r->offset;
            return integrand_xyz(t, x, y);
        };
        q = integrate_adaptive(std::function<double(double, double, double)>(g), boxes, opts);
    } else {
        q = integrate_adaptive(std::function<double(double, double, double)>(integrand_xyz), {supp},
                               opts);
    }
    return {q.value, q.error_estimate};
}

WeakResidual steady_weak(const WeakField2& U, double c, const TestFunction2& psi,
                         const EvolutionCoeffs& co, const QuadratureOptions& opts) {
    auto integrand_xy = [&](double x, double y) {
        const Partials2 p = psi.partials(x, y);
        const double uv = U.value(x, y);
        const double ux = U.x_derivative(x, y);
        double s = -c * uv * (p.xx - p.xxxx) +
                   (co.kappa * uv + co.quad_xx * uv * uv + co.grad_xx * ux * ux) * p.xx -
                   co.quad_x4 * uv * uv * p.xxxx + co.yy * uv * p.yy;
        if (co.xxyy != 0.0) s += co.xxyy * uv * p.xxyy;
        return s;
    };

    const Box2 supp = psi.support();
    QuadratureResult q;
    if (auto r = U.ridge()) {
        auto boxes = sheared_boxes(supp, *r);
        auto g = [&](double zeta, double y) { return integrand_xy(zeta - r->theta * y + r->offset, y); };
        q = integrate_adaptive(std::function<double(double, double)>(g), boxes, opts);
    } else {
        q = integrate_adaptive(std::function<double(double, double)>(integrand_xy), {supp}, opts);
    }
    return {q.value, q.error_estimate};
}

}  // namespace

// ---- test functions ---------------------------------------------------------

Partials3 TestFunction3::partials(double t, double x, double y) const {
    Partials3 p;
    p.v = eval(0, 0, 0, t, x, y);
    p.tx = eval(1, 1, 0, t, x, y);
    p.txxx = eval(1, 3, 0, t, x, y);
    p.xx = eval(0, 2, 0, t, x, y);
    p.xxxx = eval(0, 4, 0, t, x, y);
    p.yy = eval(0, 0, 2, t, x, y);
    p.xxyy = eval(0, 2, 2, t, x, y);
    return p;
}

Partials2 TestFunction2::partials(double x, double y) const {
    Partials2 p;
    p.v = eval(0, 0, x, y);
    p.xx = eval(2, 0, x, y);
    p.xxxx = eval(4, 0, x, y);
    p.yy = eval(0, 2, x, y);
    p.xxyy = eval(2, 2, x, y);
    return p;
}

Bump3::Bump3(const BumpSpec& s) : s_(s) {
    if (!(s.rt > 0.0 && s.rx > 0.0 && s.ry > 0.0))
        throw std::invalid_argument("BumpSpec: radii must be positive");
}

double Bump3::eval(int dt, int dx, int dy, double t, double x, double y) const {
    const double bt = bump_jet((t - s_.t0) / s_.rt).derivative(dt) / pow_int(s_.rt, dt);
    if (bt == 0.0) return 0.0;
    const double bx = bump_jet((x - s_.x0) / s_.rx).derivative(dx) / pow_int(s_.rx, dx);
    if (bx == 0.0) return 0.0;
    const double by = bump_jet((y - s_.y0) / s_.ry).derivative(dy) / pow_int(s_.ry, dy);
    return s_.amplitude * bt * bx * by;
}

Box3 Bump3::support() const {
    return Box3{{s_.t0 - s_.rt, s_.x0 - s_.rx, s_.y0 - s_.ry},
                {s_.t0 + s_.rt, s_.x0 + s_.rx, s_.y0 + s_.ry}};
}

Partials3 Bump3::partials(double t, double x, double y) const {
    Partials3 p;
    const Jet4 jt = bump_jet((t - s_.t0) / s_.rt);
    if (jt.a[0] == 0.0 && jt.a[1] == 0.0) return p;
    const Jet4 jx = bump_jet((x - s_.x0) / s_.rx);
    const Jet4 jy = bump_jet((y - s_.y0) / s_.ry);
    const double bt0 = jt.derivative(0), bt1 = jt.derivative(1) / s_.rt;
    const double bx0 = jx.derivative(0);
    const double bx1 = jx.derivative(1) / s_.rx;
    const double bx2 = jx.derivative(2) / (s_.rx * s_.rx);
    const double bx3 = jx.derivative(3) / (s_.rx * s_.rx * s_.rx);
    const double bx4 = jx.derivative(4) / (s_.rx * s_.rx * s_.rx * s_.rx);
    const double by0 = jy.derivative(0), by2 = jy.derivative(2) / (s_.ry * s_.ry);
    const double a = s_.amplitude;
    p.v = a * bt0 * bx0 * by0;
    p.tx = a * bt1 * bx1 * by0;
    p.txxx = a * bt1 * bx3 * by0;
    p.xx = a * bt0 * bx2 * by0;
    p.xxxx = a * bt0 * bx4 * by0;
    p.yy = a * bt0 * bx0 * by2;
    p.xxyy = a * bt0 * bx2 * by2;
    return p;
}

Bump2::Bump2(const BumpSpec2& s) : s_(s) {
    if (!(s.rx > 0.0 && s.ry > 0.0)) throw std::invalid_argument("BumpSpec2: radii must be positive");
}

double Bump2::eval(int dx, int dy, double x, double y) const {
    const double bx = bump_jet((x - s_.x0) / s_.rx).derivative(dx) / pow_int(s_.rx, dx);
    if (bx == 0.0) return 0.0;
    const double by = bump_jet((y - s_.y0) / s_.ry).derivative(dy) / pow_int(s_.ry, dy);
    return s_.amplitude * bx * by;
}

Box2 Bump2::support() const {
    return Box2{{s_.x0 - s_.rx, s_.y0 - s_.ry}, {s_.x0 + s_.rx, s_.y0 + s_.ry}};
}

Partials2 Bump2::partials(double x, double y) const {
    Partials2 p;
    const Jet4 jx = bump_jet((x - s_.x0) / s_.rx);
    const Jet4 jy = bump_jet((y - s_.y0) / s_.ry);
    const double bx0 = jx.derivative(0);
    const double bx2 = jx.derivative(2) / (s_.rx * s_.rx);
    const double bx4 = jx.derivative(4) / (s_.rx * s_.rx * s_.rx * s_.rx);
    const double by0 = jy.derivative(0), by2 = jy.derivative(2) / (s_.ry * s_.ry);
    const double a = s_.amplitude;
    p.v = a * bx0 * by0;
    p.xx = a * bx2 * by0;
    p.xxxx = a * bx4 * by0;
    p.yy = a * bx0 * by2;
    p.xxyy = a * bx2 * by2;
    return p;
}

ReflectedTestFunction3::ReflectedTestFunction3(std::shared_ptr<const TestFunction3> base,
                                               double lambda0, double lambda_dot)
    : base_(std::move(base)), l0_(lambda0), ldot_(lambda_dot) {}

double ReflectedTestFunction3::eval(int dt, int dx, int dy, double t, double x, double y) const {
    // phi_l(t,x,y) = phi(t, 2 l(t) - x, y):
    //   d_x^n phi_l = (-1)^n (d_x^n phi)(t, 2l - x, y)
    //   d_t phi_l   = (phi_t + 2 ldot phi_x)(t, 2l - x, y)
    const double xr = 2.0 * (l0_ + ldot_ * t) - x;
    const double sign = (dx % 2 == 0) ? 1.0 : -1.0;
    double v = base_->eval(dt, dx, dy, t, xr, y);
    if (dt == 1) v += 2.0 * ldot_ * base_->eval(0, dx + 1, dy, t, xr, y);
    return sign * v;
}

Box3 ReflectedTestFunction3::support() const {
    Box3 b = base_->support();
    const double l_at_lo = l0_ + ldot_ * b.lo[0];
    const double l_at_hi = l0_ + ldot_ * b.hi[0];
    const double lmin = std::min(l_at_lo, l_at_hi), lmax = std::max(l_at_lo, l_at_hi);
    Box3 r = b;
    r.lo[1] = 2.0 * lmin - b.hi[1];
    r.hi[1] = 2.0 * lmax - b.lo[1];
    return r;
}

ReflectedTestFunction3 reflect_test_function(const BumpSpec& phi, double lambda0, double lambda_dot) {
    return ReflectedTestFunction3(std::make_shared<Bump3>(phi), lambda0, lambda_dot);
}

// ---- fields -----------------------------------------------------------------

double Peakon3::value(double t, double x, double y) const {
    return p_.a * std::exp(-std::abs(x + p_.theta * y - p_.c * t));
}

double Peakon3::x_derivative(double t, double x, double y) const {
    const double s = x + p_.theta * y - p_.c * t;
    const double sgn = s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);  // ridge value is measure zero
    return -p_.a * sgn * std::exp(-std::abs(s));
}

double Peakon2::value(double x, double y) const { return a_ * std::exp(-std::abs(x + theta_ * y)); }

double Peakon2::x_derivative(double x, double y) const {
    const double s = x + theta_ * y;
    const double sgn = s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
    return -a_ * sgn * std::exp(-std::abs(s));
}

double SeparableField3::derivative(int dt, int dx, int dy, double t, double x, double y) const {
    double s = 0.0;
    for (const auto& term : terms_) {
        const double ft = factor_derivative(term.ft, dt, t);
        if (ft == 0.0) continue;
        const double fx = factor_derivative(term.fx, dx, x);
        if (fx == 0.0) continue;
        s += term.amplitude * ft * fx * factor_derivative(term.fy, dy, y);
    }
    return s;
}

SeparableField3::DerivSet SeparableField3::derivs(double t, double x, double y) const {
    DerivSet d;
    for (const auto& term : terms_) {
        double ft[2], fx[5], fy[3];
        for (int k = 0; k < 2; ++k) ft[k] = factor_derivative(term.ft, k, t);
        for (int k = 0; k < 5; ++k) fx[k] = factor_derivative(term.fx, k, x);
        for (int k = 0; k < 3; ++k) fy[k] = factor_derivative(term.fy, k, y);
        const double a = term.amplitude;
        d.utx += a * ft[1] * fx[1] * fy[0];
        d.utxxx += a * ft[1] * fx[3] * fy[0];
        d.u0 += a * ft[0] * fx[0] * fy[0];
        d.u1 += a * ft[0] * fx[1] * fy[0];
        d.u2 += a * ft[0] * fx[2] * fy[0];
        d.u3 += a * ft[0] * fx[3] * fy[0];
        d.u4 += a * ft[0] * fx[4] * fy[0];
        d.uyy += a * ft[0] * fx[0] * fy[2];
        d.uxxyy += a * ft[0] * fx[2] * fy[2];
    }
    return d;
}

double chkp_strong_at(const SeparableField3& u, double kappa, double t, double x, double y) {
    const auto d = u.derivs(t, x, y);
    return d.utx - d.utxxx + kappa * d.u2 + 3.0 * d.u1 * d.u1 + 3.0 * d.u0 * d.u2 -
           2.0 * d.u2 * d.u2 - 3.0 * d.u1 * d.u3 - d.u0 * d.u4 + d.uyy;
}

double hcp_strong_at(const SeparableField3& u, double alpha, double beta, double gamma, double t,
                     double x, double y) {
    const auto d = u.derivs(t, x, y);
    return d.utx - d.utxxx + 3.0 * d.u1 * d.u1 + 3.0 * d.u0 * d.u2 -
           gamma * (2.0 * d.u2 * d.u2 + 3.0 * d.u1 * d.u3 + d.u0 * d.u4) - alpha * d.uyy +
           beta * d.uxxyy;
}

// ---- weak residual operations ----------------------------------------------

WeakResidual weak_residual_chkp(const WeakField3& u, const TestFunction3& phi, double kappa,
                                const QuadratureOptions& opts) {
    return evolution_weak(u, phi, chkp_coeffs(kappa), opts);
}

WeakResidual weak_residual_hcp(const WeakField3& u, const TestFunction3& phi, double alpha,
                               double beta, double gamma, const QuadratureOptions& opts) {
    return evolution_weak(u, phi, hcp_coeffs(alpha, beta, gamma), opts);
}

WeakResidual steady_weak_residual_chkp(const WeakField2& U, double c, const TestFunction2& psi,
                                       double kappa, const QuadratureOptions& opts) {
    return steady_weak(U, c, psi, chkp_coeffs(kappa), opts);
}

WeakResidual steady_weak_residual_hcp(const WeakField2& U, double c, const TestFunction2& psi,
                                      double alpha, double beta, double gamma,
                                      const QuadratureOptions& opts) {
    return steady_weak(U, c, psi, hcp_coeffs(alpha, beta, gamma), opts);
}

WeakResidual pair_with_test_function(const std::function<double(double, double, double)>& f,
                                     const TestFunction3& phi, const QuadratureOptions& opts) {
    auto integrand = [&](double t, double x, double y) {
        return f(t, x, y) * phi.eval(0, 0, 0, t, x, y);
    };
    auto q = integrate_adaptive(std::function<double(double, double, double)>(integrand),
                                {phi.support()}, opts);
    return {q.value, q.error_estimate};
}

// ---- peakon zero-set scan ---------------------------------------------------

std::vector<BumpSpec2> default_scan_basis(double theta) {
    // three scales; centers on the ridge x = -theta y, in the tails, and
    // x-elongated shapes that weigh the pure-y term
    return {
        BumpSpec2{0.0, 0.0, 1.5, 1.5, 1.0},
        BumpSpec2{-2.0 * theta, 2.0, 1.5, 1.5, 1.0},
        BumpSpec2{2.0 * theta, -2.0, 1.5, 1.5, 1.0},
        BumpSpec2{0.0, 0.0, 0.75, 0.75, 1.0},
        BumpSpec2{0.0, 0.0, 3.0, 3.0, 1.0},
        BumpSpec2{2.5, 0.0, 1.5, 1.5, 1.0},
        BumpSpec2{-2.5, 0.0, 1.5, 1.5, 1.0},
        BumpSpec2{5.0, 0.0, 3.0, 3.0, 1.0},
        BumpSpec2{0.0, 0.0, 6.0, 1.0, 1.0},
        BumpSpec2{0.0, 2.5, 6.0, 1.0, 1.0},
        BumpSpec2{1.25, 1.25, 1.5, 2.0, 1.0},
    };
}

namespace {

// The peakon family U = a E, E = e^{-|x + theta y|}, makes the steady weak
// residual affine in c and quadratic in a:
//   value(a,c) = a [kappa I1 + I3 - c (I1 - I2)] + a^2 [2 J1 - 1/2 J2]
// with I1 = <E, psi_xx>, I2 = <E, psi_xxxx>, I3 = <E, psi_yy>,
//      J1 = <E^2, psi_xx>, J2 = <E^2, psi_xxxx>.
struct ScanIntegrals {
    double I1, I2, I3, J1, J2;
    double e1, e2, e3, f1, f2;  // error estimates

    double value(double a, double c, double kappa) const {
        return a * (kappa * I1 + I3 - c * (I1 - I2)) + a * a * (2.0 * J1 - 0.5 * J2);
    }
    double estimate(double a, double c, double kappa) const {
        return std::abs(a) * (std::abs(kappa) * e1 + e3 + std::abs(c) * (e1 + e2)) +
               a * a * (2.0 * f1 + 0.5 * f2);
    }
};

ScanIntegrals scan_integrals(double theta, const Bump2& psi, const QuadratureOptions& opts) {
    const RidgePlane ridge{theta, 0.0, 0.0};
    auto boxes = sheared_boxes(psi.support(), ridge);
    auto run = [&](int dx, int dy, double decay) {
        auto g = [&, dx, dy, decay](double zeta, double y) {
            const double x = zeta - theta * y;
            return std::exp(-decay * std::abs(zeta)) * psi.eval(dx, dy, x, y);
        };
        return integrate_adaptive(std::function<double(double, double)>(g), boxes, opts);
    };
    auto i1 = run(2, 0, 1.0), i2 = run(4, 0, 1.0), i3 = run(0, 2, 1.0);
    auto j1 = run(2, 0, 2.0), j2 = run(4, 0, 2.0);
    return {i1.value, i2.value, i3.value, j1.value, j2.value,
            i1.error_estimate, i2.error_estimate, i3.error_estimate, j1.error_estimate,
            j2.error_estimate};
}

}  // namespace

ZeroSet peakon_scan(double theta, double kappa, const std::vector<double>& a_grid,
                    const std::vector<double>& c_grid, const std::vector<BumpSpec2>& basis,
                    const QuadratureOptions& opts) {
    if (a_grid.empty() || c_grid.empty()) throw std::invalid_argument("peakon_scan: empty grids");
    if (basis.size() < 10)
        throw std::invalid_argument("peakon_scan: need a basis of at least 10 test functions");

    std::vector<ScanIntegrals> ints;
    ints.reserve(basis.size());
    for (const auto& spec : basis) ints.push_back(scan_integrals(theta, Bump2(spec), opts));

    auto ratio = [&](double a, double c) {
        double worst = 0.0;
        for (const auto& si : ints) {
            const double v = std::abs(si.value(a, c, kappa));
            const double e = std::max(si.estimate(a, c, kappa), 1e-300);
            if (v == 0.0) continue;
            worst = std::max(worst, v / e);
        }
        return worst;
    };

    ZeroSet zs;
    for (double a : a_grid)
        for (double c : c_grid) {
            const double R = ratio(a, c);
            if (R < 3.0) zs.sublevel.push_back({a, c, R});
        }

    // refined curve: golden-section minimum of the (convex in c) max-ratio
    const double c_lo = *std::min_element(c_grid.begin(), c_grid.end());
    const double c_hi = *std::max_element(c_grid.begin(), c_grid.end());
    constexpr double kGolden = 0.6180339887498949;
    for (double a : a_grid) {
        if (a == 0.0) continue;  // trivial line, excluded from the fit
        double lo = c_lo, hi = c_hi;
        double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
        double f1 = ratio(a, x1), f2 = ratio(a, x2);
        while (hi - lo > 1e-10 * std::max(1.0, std::abs(hi))) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kGolden * (hi - lo);
                f1 = ratio(a, x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kGolden * (hi - lo);
                f2 = ratio(a, x2);
            }
        }
        const double c_star = 0.5 * (lo + hi);
        zs.curve.push_back({a, c_star, ratio(a, c_star)});
    }

    // affine least squares through the refined curve
    if (zs.curve.size() >= 2) {
        double sa = 0, sc = 0, saa = 0, sac = 0;
        const double n = double(zs.curve.size());
        for (const auto& e : zs.curve) {
            sa += e.a;
            sc += e.c;
            saa += e.a * e.a;
            sac += e.a * e.c;
        }
        const double det = n * saa - sa * sa;
        if (std::abs(det) > 1e-300) {
            zs.fit_slope = (n * sac - sa * sc) / det;
            zs.fit_intercept = (saa * sc - sa * sac) / det;
            for (const auto& e : zs.curve)
                zs.fit_residual =
                    std::max(zs.fit_residual, std::abs(e.c - (zs.fit_slope * e.a + zs.fit_intercept)));
        }
    }
    return zs;
}

}  // namespace chkp

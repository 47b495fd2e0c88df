#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "chkp/grid.hpp"
#include "chkp/jet.hpp"
#include "chkp/quadrature.hpp"

namespace chkp {

// Quadrature evaluation of the weak formulations against closed-form fields.
// Test functions are C-infinity compactly supported products of 1D hats; all
// the derivatives entering the integrands (t-order <= 1, x-order <= 4,
// y-order <= 2, plus the mixed x2y2 term) exist in closed form via jets.

struct WeakResidual {
    double value = 0.0;
    double error_estimate = 0.0;  // |value| is meaningful only above this
};

// ---- test functions ---------------------------------------------------------

/// phi(t,x,y) = amplitude * B((t-t0)/rt) * B((x-x0)/rx) * B((y-y0)/ry)
struct BumpSpec {
    double t0 = 0.0, x0 = 0.0, y0 = 0.0;
    double rt = 1.0, rx = 1.0, ry = 1.0;
    double amplitude = 1.0;
};

/// psi(x,y) = amplitude * B((x-x0)/rx) * B((y-y0)/ry)
struct BumpSpec2 {
    double x0 = 0.0, y0 = 0.0;
    double rx = 1.0, ry = 1.0;
    double amplitude = 1.0;
};

/// all phi-derivatives the weak integrands consume, bundled per point
struct Partials3 {
    double v = 0.0, tx = 0.0, txxx = 0.0, xx = 0.0, xxxx = 0.0, yy = 0.0, xxyy = 0.0;
};

class TestFunction3 {
public:
    virtual ~TestFunction3() = default;
    /// d^dt/dt^dt d^dx/dx^dx d^dy/dy^dy phi; dt <= 1, dx <= 4, dy <= 2
    virtual double eval(int dt, int dx, int dy, double t, double x, double y) const = 0;
    virtual Box3 support() const = 0;  // axes ordered (t, x, y)
    /// batched derivatives; overridden where shared jets make it cheap
    virtual Partials3 partials(double t, double x, double y) const;
};

class Bump3 final : public TestFunction3 {
public:
    explicit Bump3(const BumpSpec& s);
    double eval(int dt, int dx, int dy, double t, double x, double y) const override;
    Box3 support() const override;
    Partials3 partials(double t, double x, double y) const override;

private:
    BumpSpec s_;
};

struct Partials2 {
    double v = 0.0, xx = 0.0, xxxx = 0.0, yy = 0.0, xxyy = 0.0;
};

class TestFunction2 {
public:
    virtual ~TestFunction2() = default;
    virtual double eval(int dx, int dy, double x, double y) const = 0;
    virtual Box2 support() const = 0;
    virtual Partials2 partials(double x, double y) const;
};

class Bump2 final : public TestFunction2 {
public:
    explicit Bump2(const BumpSpec2& s);
    double eval(int dx, int dy, double x, double y) const override;
    Box2 support() const override;
    Partials2 partials(double x, double y) const override;

private:
    BumpSpec2 s_;
};

/// T_lambda phi = phi(t, 2 lambda(t) - x, y) for affine lambda(t) = l0 + c t.
/// Chain rule is implemented exactly:
///   (phi_l)_t = (phi_t)_l - 2 c' ... realized as d_t + 2 lambda_dot d_x on
///   the reflected argument, (phi_l)_x = -(phi_x)_l, (phi_l)_y = (phi_y)_l.
class ReflectedTestFunction3 final : public TestFunction3 {
public:
    ReflectedTestFunction3(std::shared_ptr<const TestFunction3> base, double lambda0, double lambda_dot);
    double eval(int dt, int dx, int dy, double t, double x, double y) const override;
    Box3 support() const override;

private:
    std::shared_ptr<const TestFunction3> base_;
    double l0_, ldot_;
};

ReflectedTestFunction3 reflect_test_function(const BumpSpec& phi, double lambda0, double lambda_dot);

// ---- closed-form fields -----------------------------------------------------

/// Ridge plane x + theta y - c t = const of a peaked field; quadrature shears
/// coordinates so cells never straddle it.
struct RidgePlane {
    double theta = 0.0;
    double speed = 0.0;   // c; 0 for steady 2D fields
    double offset = 0.0;  // ridge at x + theta y - c t = offset
};

class WeakField3 {
public:
    virtual ~WeakField3() = default;
    virtual double value(double t, double x, double y) const = 0;
    virtual double x_derivative(double t, double x, double y) const = 0;
    virtual std::optional<RidgePlane> ridge() const { return std::nullopt; }
};

class WeakField2 {
public:
    virtual ~WeakField2() = default;
    virtual double value(double x, double y) const = 0;
    virtual double x_derivative(double x, double y) const = 0;
    virtual std::optional<RidgePlane> ridge() const { return std::nullopt; }
};

/// Peaked solitary field a e^{-|x + theta y - c t|}; the gradient jumps on
/// the ridge, (d_x u)^2 = a^2 e^{-2|.|} almost everywhere.
struct PeakonParams {
    double a = 1.0;
    double theta = 0.0;
    double c = 0.0;
};

class Peakon3 final : public WeakField3 {
public:
    explicit Peakon3(const PeakonParams& p) : p_(p) {}
    double value(double t, double x, double y) const override;
    double x_derivative(double t, double x, double y) const override;
    std::optional<RidgePlane> ridge() const override { return RidgePlane{p_.theta, p_.c, 0.0}; }
    const PeakonParams& params() const { return p_; }

private:
    PeakonParams p_;
};

/// Steady-frame peakon profile U(x,y) = a e^{-|x + theta y|}.
class Peakon2 final : public WeakField2 {
public:
    Peakon2(double a, double theta) : a_(a), theta_(theta) {}
    double value(double x, double y) const override;
    double x_derivative(double x, double y) const override;
    std::optional<RidgePlane> ridge() const override { return RidgePlane{theta_, 0.0, 0.0}; }

private:
    double a_, theta_;
};

/// 1D closed-form factors with exact derivatives to order 4.
struct HatFactor {
    double center = 0.0, radius = 1.0;
};
struct GaussFactor {
    double center = 0.0, sigma = 1.0;
};
struct WaveFactor {
    double freq = 1.0, phase = 0.0;
};
using Factor1D = std::variant<HatFactor, GaussFactor, WaveFactor>;

/// Sum of separable closed-form terms amp * Ft(t) Fx(x) Fy(y); every factor
/// carries exact derivatives to order 4, so both the weak integrand (u, u_x)
/// and the pointwise strong residual are available.
class SeparableField3 : public WeakField3 {
public:
    using Hat = HatFactor;
    using Gauss = GaussFactor;
    using Wave = WaveFactor;
    using Factor = Factor1D;
    struct Term {
        double amplitude = 1.0;
        Factor ft, fx, fy;
    };

    explicit SeparableField3(std::vector<Term> terms) : terms_(std::move(terms)) {}

    double value(double t, double x, double y) const override { return derivative(0, 0, 0, t, x, y); }
    double x_derivative(double t, double x, double y) const override {
        return derivative(0, 1, 0, t, x, y);
    }
    /// exact mixed derivative, dt <= 4, dx <= 4, dy <= 4
    double derivative(int dt, int dx, int dy, double t, double x, double y) const;

    /// everything the strong residuals need, from shared per-factor jets
    struct DerivSet {
        double utx = 0, utxxx = 0, u0 = 0, u1 = 0, u2 = 0, u3 = 0, u4 = 0, uyy = 0, uxxyy = 0;
    };
    DerivSet derivs(double t, double x, double y) const;

private:
    std::vector<Term> terms_;
};

/// Pointwise strong residuals of a closed-form field (flux expanded):
///   shallow-water: L u_t + kappa u_xx + 3u_x^2 + 3u u_xx - 2u_xx^2
///                  - 3u_x u_xxx - u u_xxxx + u_yy
///   plate:         L u_t + 3u_x^2 + 3u u_xx - gamma(2u_xx^2 + 3u_x u_xxx
///                  + u u_xxxx) - alpha u_yy + beta u_xxyy
double chkp_strong_at(const SeparableField3& u, double kappa, double t, double x, double y);
double hcp_strong_at(const SeparableField3& u, double alpha, double beta, double gamma, double t,
                     double x, double y);

// ---- weak residual operations ----------------------------------------------

WeakResidual weak_residual_chkp(const WeakField3& u, const TestFunction3& phi, double kappa,
                                const QuadratureOptions& opts = {});
WeakResidual weak_residual_hcp(const WeakField3& u, const TestFunction3& phi, double alpha,
                               double beta, double gamma, const QuadratureOptions& opts = {});
WeakResidual steady_weak_residual_chkp(const WeakField2& U, double c, const TestFunction2& psi,
                                       double kappa, const QuadratureOptions& opts = {});
WeakResidual steady_weak_residual_hcp(const WeakField2& U, double c, const TestFunction2& psi,
                                      double alpha, double beta, double gamma,
                                      const QuadratureOptions& opts = {});

/// <f, psi> over supp(psi) for a pointwise-defined f (oracle-side pairing).
WeakResidual pair_with_test_function(const std::function<double(double, double, double)>& f,
                                     const TestFunction3& phi, const QuadratureOptions& opts = {});

// ---- peakon zero-set scan ---------------------------------------------------

struct ZeroSetEntry {
    double a = 0.0, c = 0.0, R = 0.0;
};

struct ZeroSet {
    std::vector<ZeroSetEntry> sublevel;  // grid points with R < 3
    std::vector<ZeroSetEntry> curve;     // per-a refined minimizer c*(a), a != 0
    double fit_slope = 0.0;              // affine fit c ~ slope * a + intercept
    double fit_intercept = 0.0;
    double fit_residual = 0.0;  // max |c*(a) - fit(a)|
};

/// Deterministic basis: >= 10 hats at 3 scales covering the ridge
/// x + theta y = 0, the tails, and pure-y variation.
std::vector<BumpSpec2> default_scan_basis(double theta);

/// For each (a, c) record R(a,c) = max over the basis of |steady weak
/// residual| / error estimate; return the R < 3 sub-level set and the fitted
/// curve c(a). The peakon family makes the residual affine in c and quadratic
/// in a, so the grid assembles exactly from five elementary integrals per
/// test function.
ZeroSet peakon_scan(double theta, double kappa, const std::vector<double>& a_grid,
                    const std::vector<double>& c_grid, const std::vector<BumpSpec2>& basis,
                    const QuadratureOptions& opts = {});

}  // namespace chkp

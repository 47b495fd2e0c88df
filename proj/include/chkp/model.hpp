#pragma once

#include <string>
#include <variant>

#include "chkp/grid.hpp"

namespace chkp {

// Two evolution models on the torus, both of the form  L u_t + B(u) = 0 with
// L = d/dx (1 - d^2/dx^2):
//
//   shallow-water (CH-KP, normalized):
//       B(u) = kappa u_xx + (3 u u_x - 2 u_x u_xx - u u_xxx)_x + u_yy
//   hyperelastic plate (HCP):
//       B(u) = (3 u u_x - gamma (2 u_x u_xx + u u_xxx))_x - alpha u_yy + beta u_xxyy
//
// Time convention, fixed here and pinned by the single-mode evolution tests:
// plane waves are u ~ exp(i(xi x + eta y - omega t)), so a spectral
// coefficient evolves as c(t) = exp(-i omega t) c(0) with omega = linear_symbol.

struct ChkpParams {
    double kappa = 0.0;
};

struct HcpParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

/// Physical-form parameters of the unnormalized shallow-water equation;
/// evolution in this form is handled through the scale map, not directly.
struct ChkpPhysicalParams {
    double epsilon = 0.0;
    double gamma_phys = 0.0;
};

class ModelParams {
public:
    ModelParams(ChkpParams p) : v_(p) {}
    ModelParams(HcpParams p) : v_(validate(p)) {}
    ModelParams(ChkpPhysicalParams p) : v_(validate(p)) {}

    bool is_chkp() const { return std::holds_alternative<ChkpParams>(v_); }
    bool is_hcp() const { return std::holds_alternative<HcpParams>(v_); }
    bool is_chkp_physical() const { return std::holds_alternative<ChkpPhysicalParams>(v_); }

    const ChkpParams& chkp() const { return std::get<ChkpParams>(v_); }
    const HcpParams& hcp() const { return std::get<HcpParams>(v_); }
    const ChkpPhysicalParams& chkp_physical() const { return std::get<ChkpPhysicalParams>(v_); }

    std::string tag() const;

private:
    static HcpParams validate(const HcpParams& p) {
        if (p.alpha < 0.0 || p.beta < 0.0 || p.gamma < 0.0)
            throw std::invalid_argument("HCP parameters must be nonnegative");
        return p;
    }
    static ChkpPhysicalParams validate(const ChkpPhysicalParams& p);
    std::variant<ChkpParams, HcpParams, ChkpPhysicalParams> v_;
};

/// u_t for the normalized shallow-water model: -L^{-1} B(u). Input admissible.
Field2D chkp_rhs(const Field2D& u, const ModelParams& p);

/// u_t for the plate model: -L^{-1} B(u). Input admissible.
Field2D hcp_rhs(const Field2D& u, const ModelParams& p);

/// Dispatch on p.tag().
Field2D model_rhs(const Field2D& u, const ModelParams& p);

/// Real dispersion frequency omega(xi,eta) (xi != 0):
///   CH-KP: omega = (kappa xi^2 + eta^2) / (xi (1 + xi^2))
///   HCP:   omega = -p(xi,eta),  p = (alpha eta^2/xi + beta xi eta^2)/(1 + xi^2)
double linear_symbol(const ModelParams& p, double xi, double eta);

/// L(ut) + B(u): zero iff (u, ut) satisfies the strong equation.
Field2D strong_residual(const Field2D& u, const Field2D& ut, const ModelParams& p);

/// Traveling-wave residual -c L(g_x) + B(g); zero iff g(x - c t, y) solves the model.
Field2D tw_residual(const Field2D& g, double c, const ModelParams& p);

/// Directional derivative of tw_residual in g (exact Jacobian action).
Field2D tw_residual_dg(const Field2D& g, const Field2D& v, double c, const ModelParams& p);
/// Derivative of tw_residual in c: -L(g_x).
Field2D tw_residual_dc(const Field2D& g, const ModelParams& p);

}  // namespace chkp

#include "chkp/model.hpp"

#include <cmath>
#include <iostream>

#include "chkp/spectral.hpp"

namespace chkp {

namespace {

struct FluxCoeffs {
    double a, b, d;  // a*u*u_x - b*u_x*u_xx - d*u*u_xxx
};

FluxCoeffs flux_coeffs(const ModelParams& p) {
    if (p.is_chkp()) return {3.0, 2.0, 1.0};
    if (p.is_hcp()) return {3.0, 2.0 * p.hcp().gamma, p.hcp().gamma};
    throw std::invalid_argument("physical-form parameters have no normalized evolution");
}

// Symmetric bilinear version of the quadratic flux, so that the same code
// path yields the flux P(u,u) and the Jacobian action 2 P(u,v). Products are
// formed from 2/3-truncated factors and the result is truncated again before
// the outer d/dx is applied.
Field2D flux_x(const Field2D& u, const Field2D& w, const FluxCoeffs& fc) {
    SpectralField2D uh = fft2(u);
    dealias_23(uh);
    SpectralField2D u1h = uh, u2h = uh, u3h = uh;
    deriv_inplace(u1h, 1, 0);
    deriv_inplace(u2h, 2, 0);
    deriv_inplace(u3h, 3, 0);
    Field2D u0 = ifft2(uh), u1 = ifft2(u1h), u2 = ifft2(u2h), u3 = ifft2(u3h);

    Field2D prod(u.grid());
    const bool same = (&u == &w);
    if (same) {
        for (std::size_t i = 0; i < prod.size(); ++i) {
            const double a0 = u0.data()[i], a1 = u1.data()[i], a2 = u2.data()[i], a3 = u3.data()[i];
            prod.data()[i] = fc.a * a0 * a1 - fc.b * a1 * a2 - fc.d * a0 * a3;
        }
    } else {
        SpectralField2D wh = fft2(w);
        dealias_23(wh);
        SpectralField2D w1h = wh, w2h = wh, w3h = wh;
        deriv_inplace(w1h, 1, 0);
        deriv_inplace(w2h, 2, 0);
        deriv_inplace(w3h, 3, 0);
        Field2D w0 = ifft2(wh), w1 = ifft2(w1h), w2 = ifft2(w2h), w3 = ifft2(w3h);
        for (std::size_t i = 0; i < prod.size(); ++i) {
            const double a0 = u0.data()[i], a1 = u1.data()[i], a2 = u2.data()[i], a3 = u3.data()[i];
            const double b0 = w0.data()[i], b1 = w1.data()[i], b2 = w2.data()[i], b3 = w3.data()[i];
            prod.data()[i] = 0.5 * fc.a * (a0 * b1 + b0 * a1) - 0.5 * fc.b * (a1 * b2 + b1 * a2) -
                             0.5 * fc.d * (a0 * b3 + b0 * a3);
        }
    }
    SpectralField2D ph = fft2(prod);
    dealias_23(ph);
    deriv_inplace(ph, 1, 0);
    return ifft2(ph);
}

// B(u) such that the strong equation reads L u_t + B(u) = 0.
Field2D bracket(const Field2D& u, const ModelParams& p) {
    Field2D b = flux_x(u, u, flux_coeffs(p));
    if (p.is_chkp()) {
        b += p.chkp().kappa * deriv(u, 2, 0);
        b += deriv(u, 0, 2);
    } else {
        b -= p.hcp().alpha * deriv(u, 0, 2);
        b += p.hcp().beta * deriv(u, 2, 2);
    }
    return b;
}

// Linearization of bracket() around g, applied to v.
Field2D bracket_dg(const Field2D& g, const Field2D& v, const ModelParams& p) {
    Field2D b = 2.0 * flux_x(g, v, flux_coeffs(p));
    if (p.is_chkp()) {
        b += p.chkp().kappa * deriv(v, 2, 0);
        b += deriv(v, 0, 2);
    } else {
        b -= p.hcp().alpha * deriv(v, 0, 2);
        b += p.hcp().beta * deriv(v, 2, 2);
    }
    return b;
}

Field2D neg_Linv_bracket(const Field2D& u, const ModelParams& p) {
    require_admissible(u, "model rhs");
    Field2D b = bracket(u, p);
    SpectralField2D bh = fft2(b);
    invert_L_inplace(bh);
    Field2D r = ifft2(bh);
    r *= -1.0;
    return r;
}

}  // namespace

ChkpPhysicalParams ModelParams::validate(const ChkpPhysicalParams& p) {
    if (!(p.epsilon > 0.0) || !(p.gamma_phys > 0.0))
        throw std::invalid_argument("physical parameters epsilon, gamma must be positive");
    if (p.epsilon > 1.0 || p.gamma_phys > 1.0)
        std::cerr << "warning: physical parameters outside (0,1]; the equation models small "
                     "nonlinearity and dispersion (epsilon="
                  << p.epsilon << ", gamma=" << p.gamma_phys << ")\n";
    return p;
}

std::string ModelParams::tag() const {
    if (is_chkp()) return "chkp";
    if (is_hcp()) return "hcp";
    return "chkp_physical";
}

Field2D chkp_rhs(const Field2D& u, const ModelParams& p) {
    if (!p.is_chkp()) throw std::invalid_argument("chkp_rhs: wrong parameter tag");
    return neg_Linv_bracket(u, p);
}

Field2D hcp_rhs(const Field2D& u, const ModelParams& p) {
    if (!p.is_hcp()) throw std::invalid_argument("hcp_rhs: wrong parameter tag");
    return neg_Linv_bracket(u, p);
}

Field2D model_rhs(const Field2D& u, const ModelParams& p) {
    if (p.is_chkp()) return chkp_rhs(u, p);
    if (p.is_hcp()) return hcp_rhs(u, p);
    throw std::invalid_argument("model_rhs: physical-form evolution is handled by the scale map");
}

double linear_symbol(const ModelParams& p, double xi, double eta) {
    if (xi == 0.0) throw std::invalid_argument("linear_symbol: zero mode excluded");
    const double denom = xi * (1.0 + xi * xi);
    if (p.is_chkp()) return (p.chkp().kappa * xi * xi + eta * eta) / denom;
    if (p.is_hcp()) {
        const auto& h = p.hcp();
        return -(h.alpha * eta * eta / xi + h.beta * xi * eta * eta) / (1.0 + xi * xi);
    }
    throw std::invalid_argument("linear_symbol: physical-form parameters have no normalized symbol");
}

Field2D strong_residual(const Field2D& u, const Field2D& ut, const ModelParams& p) {
    require_admissible(u, "strong_residual(u)");
    require_admissible(ut, "strong_residual(ut)");
    return apply_L(ut) + bracket(u, p);
}

Field2D tw_residual(const Field2D& g, double c, const ModelParams& p) {
    Field2D r = bracket(g, p);
    Field2D lgx = apply_L(deriv(g, 1, 0));
    r -= c * lgx;
    return r;
}

Field2D tw_residual_dg(const Field2D& g, const Field2D& v, double c, const ModelParams& p) {
    Field2D r = bracket_dg(g, v, p);
    r -= c * apply_L(deriv(v, 1, 0));
    return r;
}

Field2D tw_residual_dc(const Field2D& g, const ModelParams& p) {
    (void)p;
    Field2D r = apply_L(deriv(g, 1, 0));
    r *= -1.0;
    return r;
}

}  // namespace chkp

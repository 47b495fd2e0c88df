#pragma once

#include "chkp/grid.hpp"

namespace chkp {

// Fourier machinery on the periodic grid. Convention: forward transform is
// unnormalized, the inverse carries 1/(nx*ny), so
//   f(x,y) = (1/(nx*ny)) * sum_{j,k} c(j,k) exp(i(xi_j x + eta_k y)).
//
// Modes at the x- or y-Nyquist frequency carry no usable phase information;
// odd-order derivative multipliers annihilate them and fractional shifts act
// on them through the real cosine branch. Well-resolved (band-limited) fields
// keep no energy there, and every exactness statement below is on that
// subspace.

SpectralField2D fft2(const Field2D& f);
Field2D ifft2(const SpectralField2D& c);

/// Spectral derivative d^px/dx^px d^py/dy^py; px+py <= 4.
Field2D deriv(const Field2D& f, int px, int py);
void deriv_inplace(SpectralField2D& c, int px, int py);

/// L f = d/dx (1 - d^2/dx^2) f, multiplier i*xi*(1+xi^2).
Field2D apply_L(const Field2D& f);
void apply_L_inplace(SpectralField2D& c);

/// Inverse of L on the zero-x-mean subspace; multiplier 1/(i*xi*(1+xi^2))
/// for xi != 0, zero on xi = 0. Input must be admissible.
Field2D invert_L(const Field2D& f);
void invert_L_inplace(SpectralField2D& c);

/// Sub-grid translation f(x - delta_x, y) via phase factors exp(-i*xi*delta_x).
Field2D spectral_shift(const Field2D& f, double delta_x);
void spectral_shift_inplace(SpectralField2D& c, double delta_x);

/// Reflection about the axis x = lambda: returns f(2*lambda - x, y).
/// On the torus the axis is only defined modulo lx/2.
Field2D reflect(const Field2D& f, double lambda);

/// 2/3-rule truncation: zero all modes with |j| > nx/3 or |k| > ny/3.
void dealias_23(SpectralField2D& c);
Field2D dealias_23(const Field2D& f);

/// Zero the j=0 x-modes (enforces zero x-mean on every row).
void project_zero_xmean(Field2D& f);

/// H1 x,y-seminorm: sqrt( ||u_x||^2 + ||u_y||^2 ), computed spectrally.
double h1_seminorm(const Field2D& f);

/// Evaluate the trigonometric interpolant of f at an arbitrary point.
/// O(nx*ny) per call; intended for verification, not inner loops.
double eval_interpolant(const SpectralField2D& c, double x, double y);

}  // namespace chkp

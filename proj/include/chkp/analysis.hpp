#pragma once

#include <string>
#include <vector>

#include "chkp/timestep.hpp"

namespace chkp {

// Detectors for the two observable properties this laboratory ties together:
// x-symmetry about a moving axis lambda(t), and steadiness u = g(x - c t, y).
// On the torus a reflection axis is only defined modulo lx/2; detectors
// return the representative in [0, lx/2) and fits unwrap across that period.

struct SymmetryReport {
    std::vector<std::pair<double, double>> lambda_of_t;     // (t, lambda*)
    std::vector<std::pair<double, double>> asymmetry_of_t;  // (t, score)
    double lambda_dot_estimate = 0.0;                       // slope of the affine fit
    double lambda_curvature = 0.0;                          // quadratic coefficient of the fit
    double symmetric_threshold = 1e-6;
};

struct SteadinessReport {
    double speed_estimate = 0.0;
    std::vector<std::pair<double, double>> shape_error_of_t;
    std::string verdict;  // steady | not-steady | inconclusive
    double steady_threshold = 1e-5;
    double max_shape_error = 0.0;
};

/// Relative reflection defect A(lambda) = ||u - reflect(u,lambda)||_2 / ||u||_2.
/// Zero iff u is x-symmetric about lambda on the grid. Throws on zero fields.
double asymmetry(const Field2D& u, double lambda);

/// Global minimizer of asymmetry(u, .): coarse scan over nx candidate axes in
/// [0, lx/2), then golden-section refinement to 1e-10 in lambda; ties broken
/// by the smallest lambda. Returns (lambda*, score).
std::pair<double, double> find_axis(const Field2D& u);

/// Phase-correlation speed: sub-grid shift maximizing the L2 correlation
/// (first-x-harmonic phase seed, golden-section refinement), divided by the
/// time gap. The shift is reported on the branch nearest zero.
double estimate_speed(const Snapshot& s1, const Snapshot& s2);

/// Speed from consecutive pairwise shifts (accumulated, so transits beyond
/// one period do not wrap), then shape errors against the shifted initial
/// frame. Requires at least 3 snapshots.
SteadinessReport steadiness_report(const std::vector<Snapshot>& series, double steady_threshold = 1e-5);

/// Axis track and affine fit over a snapshot series.
SymmetryReport symmetry_report(const std::vector<Snapshot>& series, double symmetric_threshold = 1e-6);

}  // namespace chkp

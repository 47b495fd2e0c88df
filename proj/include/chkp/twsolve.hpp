#pragma once

#include <vector>

#include "chkp/model.hpp"

namespace chkp {

/// A converged traveling-wave profile g(x - c t, y), even in x about 0.
struct TravelingWave {
    Field2D profile;
    double speed = 0.0;
    ModelParams model;
    double residual_norm = 0.0;
};

class TwSolveError : public std::runtime_error {
public:
    TwSolveError(std::string what, double last_residual)
        : std::runtime_error(std::move(what)), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

struct TwSolveOptions {
    int max_newton = 150;
    int gmres_m = 250;       // Krylov basis per cycle; restarting loses the
    int gmres_restarts = 2;  // subspace on these indefinite systems, so keep m large
    bool trace = false;      // per-iteration progress on stderr
};

/// Small-amplitude wave speed at the first x-harmonic, omega(xi_1, 0)/xi_1.
double linear_wave_speed(const ModelParams& p, const Grid2D& grid);

/// Newton iteration on F(g,c) = tw_residual(g,c,p) with evenness about x=0
/// imposed and the amplitude pinned at g(0, ly/2) = seed(0, ly/2), solving
/// for (g, c) jointly. Linear solves are GMRES preconditioned by the inverse
/// of the constant-coefficient linearization, which is diagonal spectrally.
TravelingWave solve_tw(const Field2D& seed, double c0, const ModelParams& p, double tol,
                       const TwSolveOptions& opts = {});

/// Continuation in the pinned amplitude: n steps of dA, each Newton-corrected
/// to tol. Stops early on non-convergence, returning the partial branch.
std::vector<TravelingWave> continue_branch(const TravelingWave& start, double dA, int n, double tol,
                                           const TwSolveOptions& opts = {});

/// Even cosine seed A cos(2 pi x / lx), the shape of the small-amplitude branch.
Field2D cosine_seed(const Grid2D& grid, double amplitude);

}  // namespace chkp

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chkp/model.hpp"

namespace chkp {

struct Snapshot {
    double t = 0.0;
    Field2D field;
};

struct DiagnosticsRow {
    double t = 0.0;
    double l2_norm = 0.0;
    double h1_seminorm = 0.0;
    double max_abs = 0.0;
    double xmean_drift = 0.0;
};

/// Thrown when a step produces NaN/Inf; the model family is known to break
/// waves in finite time, so this is a reportable outcome, not a bug.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, std::string what) : std::runtime_error(std::move(what)), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

/// One integrating-factor RK4 stepper instance: the linear dispersion is
/// propagated exactly through phase factors, classical RK4 handles the
/// nonlinear remainder. Zero x-modes are projected out after every step.
class IfRk4 {
public:
    IfRk4(const Grid2D& grid, const ModelParams& params, double dt);

    Field2D step(const Field2D& u) const;
    /// Spectral-space step for callers that stay in coefficient space.
    void step_hat(SpectralField2D& u_hat, double t_now) const;

    double dt() const { return dt_; }

    /// Advertised advective bound dt <= 0.5 dx / max|u|; infinity for u = 0.
    static double stable_dt_bound(const Field2D& u);

private:
    Grid2D grid_;
    ModelParams params_;
    double dt_;
    std::vector<std::complex<double>> e_half_;  // exp(-i omega dt/2)
    std::vector<std::complex<double>> e_full_;
};

struct InitialGaussian {
    double amplitude = 0.1;
    double x0 = 0.0, y0 = 0.0;
    double sigma_x = 1.0, sigma_y = 1.0;
};
struct InitialMode {
    double amplitude = 1e-8;
    int jx = 1, ky = 0;
};
struct InitialRandom {
    double amplitude = 0.01;
    int jmax = 4, kmax = 4;
    unsigned long long seed = 1;
};
struct InitialFile {
    std::string path;
};
using InitialSpec = std::variant<InitialGaussian, InitialMode, InitialRandom, InitialFile>;

/// Build the (admissible) initial field for a spec on a grid.
Field2D make_initial(const InitialSpec& spec, const Grid2D& grid);

struct RunConfig {
    ModelParams model;
    Grid2D grid;
    double t_end = 1.0;
    double dt = 1e-2;
    int snapshot_every = 10;
    InitialSpec initial;
};

struct SimulationResult {
    std::vector<Snapshot> snapshots;
    std::vector<DiagnosticsRow> diagnostics;
};

/// Run the stepper; snapshots (and one diagnostics row) every
/// `snapshot_every` steps, plus the initial and final states. The sink, when
/// given, sees each snapshot as soon as it exists so partial results survive
/// a blow-up; the blow-up is then rethrown.
SimulationResult simulate(const RunConfig& cfg,
                          const std::function<void(const Snapshot&, const DiagnosticsRow&)>& sink = {});

}  // namespace chkp

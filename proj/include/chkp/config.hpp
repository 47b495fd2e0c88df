#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chkp/timestep.hpp"
#include "chkp/transform.hpp"
#include "chkp/weakform.hpp"

namespace chkp {

/// Malformed config; carries the offending key path (e.g. "time.dt").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key_path, const std::string& what)
        : std::runtime_error(key_path + ": " + what), key_path_(std::move(key_path)) {}
    const std::string& key_path() const { return key_path_; }

private:
    std::string key_path_;
};

struct SimulateConfig {
    unsigned long long seed = 0;
    RunConfig run;
    std::string initial_file;  // set when initial.type == "file"
};

struct TwSolveConfig {
    ModelParams model{ChkpParams{}};
    Grid2D grid;
    double amplitude = 0.1;
    std::optional<double> c0;             // default: linear first-harmonic speed
    double tol = 1e-11;
    int max_newton = 150;
    std::optional<double> continuation_from;  // enter the branch at this amplitude
    std::optional<std::pair<double, int>> branch;  // (dA, steps)
};

struct WeakResidualConfig {
    bool steady = false;
    ModelParams model{ChkpParams{}};
    PeakonParams field;
    BumpSpec test_function;  // rt ignored for the steady form
    QuadratureOptions quadrature{1e-8, 400000};
};

struct PeakonScanConfig {
    double theta = 0.0;
    double kappa = 0.0;
    std::vector<double> a_grid;
    std::vector<double> c_grid;
    std::vector<BumpSpec2> basis;  // empty = default basis
    QuadratureOptions quadrature{1e-8, 400000};
};

struct TransformConfig {
    ScaleMap map;
    bool to_physical = true;
};

SimulateConfig parse_simulate_config(const std::string& path);
TwSolveConfig parse_twsolve_config(const std::string& path);
WeakResidualConfig parse_weak_residual_config(const std::string& path);
PeakonScanConfig parse_peakon_scan_config(const std::string& path);
TransformConfig parse_transform_config(const std::string& path);

}  // namespace chkp

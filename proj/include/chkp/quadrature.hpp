#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

namespace chkp {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <int D>
struct Box {
    std::array<double, D> lo{}, hi{};
    double extent(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const {
        double v = 1.0;
        for (int d = 0; d < D; ++d) v *= extent(d);
        return v;
    }
};
using Box2 = Box<2>;
using Box3 = Box<3>;

struct QuadratureOptions {
    double tol = 1e-9;      // absolute tolerance on the integral
    long max_cells = 400000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long cells = 0;
};

// Composite Gauss-Legendre (8 nodes per axis per cell) with adaptive
// bisection along the longest axis, driven by the Richardson-style
// cell-vs-children disagreement. Initial boxes let callers pre-split at a
// known non-smooth interface so each cell sees a smooth integrand.
QuadratureResult integrate_adaptive(const std::function<double(double, double)>& f,
                                    const std::vector<Box2>& initial, const QuadratureOptions& opts);
QuadratureResult integrate_adaptive(const std::function<double(double, double, double)>& f,
                                    const std::vector<Box3>& initial, const QuadratureOptions& opts);

// Uniform composite rule at a fixed subdivision (error estimate from the
// same cell-vs-children disagreement); exposes the convergence-order
// behavior directly for verification.
QuadratureResult integrate_uniform(const std::function<double(double, double)>& f, const Box2& box,
                                   int cells_per_axis);

}  // namespace chkp

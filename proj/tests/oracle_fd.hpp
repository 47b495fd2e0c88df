#pragma once

// Finite-difference oracle, independent of the spectral machinery under test.
// 4th-order central stencils on periodic samples (Fornberg coefficients).

#include <vector>

#include "chkp/grid.hpp"

namespace testutil {

inline double fd_stencil_1d(const std::vector<double>& f, int i, int n, double h, int order) {
    auto at = [&](int k) { return f[std::size_t((k % n + n) % n)]; };
    switch (order) {
        case 1:
            return (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12 * h);
        case 2:
            return (-at(i + 2) + 16 * at(i + 1) - 30 * at(i) + 16 * at(i - 1) - at(i - 2)) / (12 * h * h);
        case 3:
            return (-at(i + 3) + 8 * at(i + 2) - 13 * at(i + 1) + 13 * at(i - 1) - 8 * at(i - 2) +
                    at(i - 3)) /
                   (8 * h * h * h);
        case 4:
            return (-at(i + 3) + 12 * at(i + 2) - 39 * at(i + 1) + 56 * at(i) - 39 * at(i - 1) +
                    12 * at(i - 2) - at(i - 3)) /
                   (6 * h * h * h * h);
        default:
            throw std::invalid_argument("fd_stencil_1d: order 1..4");
    }
}

/// 4th-order-accurate periodic FD derivative d^px/dx^px d^py/dy^py.
inline chkp::Field2D fd_deriv(const chkp::Field2D& f, int px, int py) {
    const chkp::Grid2D& g = f.grid();
    chkp::Field2D r = f;
    if (px > 0) {
        std::vector<double> row(g.nx);
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) row[ix] = r(ix, iy);
            for (int ix = 0; ix < g.nx; ++ix) r(ix, iy) = fd_stencil_1d(row, ix, g.nx, g.dx(), px);
        }
    }
    if (py > 0) {
        std::vector<double> col(g.ny);
        for (int ix = 0; ix < g.nx; ++ix) {
            for (int iy = 0; iy < g.ny; ++iy) col[iy] = r(ix, iy);
            for (int iy = 0; iy < g.ny; ++iy) r(ix, iy) = fd_stencil_1d(col, iy, g.ny, g.dy(), py);
        }
    }
    return r;
}

}  // namespace testutil

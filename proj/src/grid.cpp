#include "chkp/grid.hpp"

#include <algorithm>
#include <cmath>

namespace chkp {

Field2D operator+(const Field2D& a, const Field2D& b) {
    check_same_grid(a, b, "operator+");
    Field2D r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] += b.data()[i];
    return r;
}

Field2D operator-(const Field2D& a, const Field2D& b) {
    check_same_grid(a, b, "operator-");
    Field2D r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] -= b.data()[i];
    return r;
}

Field2D operator*(double s, const Field2D& a) {
    Field2D r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] *= s;
    return r;
}

Field2D operator*(const Field2D& a, const Field2D& b) {
    check_same_grid(a, b, "operator*");
    Field2D r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] *= b.data()[i];
    return r;
}

Field2D& operator+=(Field2D& a, const Field2D& b) {
    check_same_grid(a, b, "operator+=");
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
    return a;
}

Field2D& operator-=(Field2D& a, const Field2D& b) {
    check_same_grid(a, b, "operator-=");
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] -= b.data()[i];
    return a;
}

Field2D& operator*=(Field2D& a, double s) {
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] *= s;
    return a;
}

double l2_norm(const Field2D& f) { return std::sqrt(l2_inner(f, f)); }

double l2_inner(const Field2D& a, const Field2D& b) {
    check_same_grid(a, b, "l2_inner");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
    return s * a.grid().dx() * a.grid().dy();
}

double max_abs(const Field2D& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f.data()[i]));
    return m;
}

bool all_finite(const Field2D& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!std::isfinite(f.data()[i])) return false;
    return true;
}

double xmean_drift(const Field2D& f) {
    const Grid2D& g = f.grid();
    double worst = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        double m = 0.0;
        for (int ix = 0; ix < g.nx; ++ix) m += f(ix, iy);
        worst = std::max(worst, std::abs(m / g.nx));
    }
    return worst;
}

bool is_admissible(const Field2D& f, double rel_tol) {
    double scale = max_abs(f);
    if (scale == 0.0) return true;
    return xmean_drift(f) < rel_tol * scale;
}

void require_admissible(const Field2D& f, const char* what) {
    if (!all_finite(f)) throw std::invalid_argument(std::string(what) + ": field has non-finite entries");
    if (!is_admissible(f))
        throw std::invalid_argument(std::string(what) + ": field is not admissible (nonzero x-mean row)");
}

}  // namespace chkp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chkp/spectral.hpp"
#include "oracle_fd.hpp"
#include "test_support.hpp"

using namespace chkp;
using testutil::fill;
using testutil::random_admissible;
using testutil::sup_diff;

namespace {
const Grid2D g64(64, 32, 2.0 * M_PI, 2.0 * M_PI);
}

TEST_CASE("grid invariants are enforced") {
    CHECK_THROWS(Grid2D(7, 32, 1.0, 1.0));
    CHECK_THROWS(Grid2D(6, 32, 1.0, 1.0));
    CHECK_THROWS(Grid2D(64, 32, 0.0, 1.0));
    CHECK_THROWS(Grid2D(64, 32, 1.0, -2.0));
    Grid2D g(8, 8, 1.0, 2.0);
    CHECK(g.dx() == doctest::Approx(0.125));
    CHECK(g.xi(1) == doctest::Approx(2.0 * M_PI));
    CHECK(g.xi(7) == doctest::Approx(-2.0 * M_PI));
}

TEST_CASE("deriv: analytic sine derivative") {
    const Grid2D g(64, 16, 4.0, 1.0);
    Field2D f = fill(g, [&](double x, double) { return std::sin(2.0 * M_PI * x / g.lx); });
    Field2D expect = fill(g, [&](double x, double) {
        return (2.0 * M_PI / g.lx) * std::cos(2.0 * M_PI * x / g.lx);
    });
    CHECK(sup_diff(deriv(f, 1, 0), expect) < 1e-12);
}

TEST_CASE("deriv: constants die") {
    Field2D f = fill(g64, [](double, double) { return 3.7; });
    CHECK(max_abs(deriv(f, 1, 0)) < 1e-13);
    CHECK(max_abs(deriv(f, 0, 2)) < 1e-12);
    CHECK(max_abs(deriv(f, 2, 1)) < 1e-12);
}

TEST_CASE("deriv: mixed derivatives commute on random band-limited data") {
    Field2D f = random_admissible(g64, 8, 8, 11);
    Field2D a = deriv(deriv(f, 1, 0), 0, 1);
    Field2D b = deriv(f, 1, 1);
    CHECK(sup_diff(a, b) < 1e-12 * std::max(1.0, max_abs(b)));
}

TEST_CASE("deriv: order above 4 rejected") {
    Field2D f = random_admissible(g64, 4, 4, 2);
    CHECK_THROWS(deriv(f, 5, 0));
    CHECK_THROWS(deriv(f, 3, 2));
    CHECK_NOTHROW(deriv(f, 2, 2));
}

TEST_CASE("apply_L: sin(x) -> 2 cos(x) on lx = 2 pi") {
    // moderate grid: the i xi (1+xi^2) multiplier amplifies sampling roundoff
    // at the top modes, so the strict analytic tolerance needs xi_max modest
    const Grid2D g(32, 16, 2.0 * M_PI, 2.0 * M_PI);
    Field2D f = fill(g, [](double x, double) { return std::sin(x); });
    Field2D expect = fill(g, [](double x, double) { return 2.0 * std::cos(x); });
    CHECK(sup_diff(apply_L(f), expect) < 1e-12);
}

TEST_CASE("apply_L: y-only fields are annihilated") {
    Field2D f = fill(g64, [](double, double y) { return std::cos(2.0 * y) + 0.3 * std::sin(y); });
    CHECK(max_abs(apply_L(f)) < 1e-12);
}

TEST_CASE("apply_L: multiplier i xi (1+xi^2) against the finite-difference oracle") {
    // L f = f_x - f_xxx; the FD oracle on a high-resolution grid pins the
    // multiplier down to its own truncation error.
    const Grid2D gf(512, 8, 2.0 * M_PI, 1.0);
    Field2D f = fill(gf, [](double x, double) { return std::cos(3.0 * x + 0.4); });
    Field2D fd = testutil::fd_deriv(f, 1, 0) - testutil::fd_deriv(f, 3, 0);
    CHECK(sup_diff(apply_L(f), fd) < 1e-5);
    // exact coefficient ratio at the excited mode
    SpectralField2D before = fft2(f);
    SpectralField2D after = fft2(apply_L(f));
    const std::complex<double> ratio = after(3, 0) / before(3, 0);
    CHECK(std::abs(ratio - std::complex<double>(0.0, 3.0 * 10.0)) < 1e-12 * 30.0);
    // closed form on a moderate grid where roundoff amplification is negligible
    const Grid2D gm(32, 16, 2.0 * M_PI, 2.0 * M_PI);
    Field2D f2 = fill(gm, [](double x, double) { return std::cos(3.0 * x + 0.4); });
    Field2D expect = fill(gm, [](double x, double) { return -30.0 * std::sin(3.0 * x + 0.4); });
    CHECK(sup_diff(apply_L(f2), expect) < 1e-11);
}

TEST_CASE("invert_L: inverse identity on admissible band-limited fields") {
    Field2D f = random_admissible(g64, 10, 10, 3);
    CHECK(sup_diff(invert_L(apply_L(f)), f) < 1e-12);
    CHECK(sup_diff(apply_L(invert_L(f)), f) < 1e-12);
}

TEST_CASE("invert_L: 2 cos(x) -> sin(x)") {
    Field2D f = fill(g64, [](double x, double) { return 2.0 * std::cos(x); });
    Field2D expect = fill(g64, [](double x, double) { return std::sin(x); });
    CHECK(sup_diff(invert_L(f), expect) < 1e-12);
}

TEST_CASE("invert_L: nonzero x-mean is rejected") {
    Field2D f = fill(g64, [](double, double y) { return 1.0 + 0.1 * std::cos(y); });
    CHECK_THROWS_WITH_AS(invert_L(f), "invert_L: zero x-mode not in range of L", std::invalid_argument);
}

TEST_CASE("spectral_shift: periodicity, grid rotation, group property") {
    Field2D f = random_admissible(g64, 9, 9, 5);
    CHECK(sup_diff(spectral_shift(f, g64.lx), f) < 1e-12);

    Field2D rot = spectral_shift(f, g64.dx());
    for (int iy = 0; iy < g64.ny; ++iy)
        for (int ix = 0; ix < g64.nx; ++ix)
            CHECK(rot(ix, iy) == doctest::Approx(f((ix - 1 + g64.nx) % g64.nx, iy)).epsilon(1e-12));

    Field2D back = spectral_shift(spectral_shift(f, 0.3 * g64.dx()), -0.3 * g64.dx());
    CHECK(sup_diff(back, f) < 1e-12);
}

TEST_CASE("reflect: symmetry, involution, odd functions") {
    const double x0 = 0.37 * g64.lx;
    Field2D even = fill(g64, [&](double x, double y) {
        return std::cos(2.0 * (x - x0)) * (1.0 + 0.5 * std::sin(y)) + 0.2 * std::cos(x - x0);
    });
    CHECK(sup_diff(reflect(even, x0), even) < 1e-12);

    Field2D f = random_admissible(g64, 9, 9, 7);
    CHECK(sup_diff(reflect(reflect(f, 1.234), 1.234), f) < 1e-12);

    Field2D s = fill(g64, [](double x, double) { return std::sin(x); });
    Field2D ms = fill(g64, [](double x, double) { return -std::sin(x); });
    CHECK(sup_diff(reflect(s, 0.0), ms) < 1e-12);
}

TEST_CASE("Parseval and reflect isometry") {
    Field2D f = random_admissible(g64, 10, 10, 13);
    SpectralField2D c = fft2(f);
    double spec = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) spec += std::norm(c.data()[i]);
    spec = std::sqrt(spec * g64.dx() * g64.dy() / double(g64.size()));
    CHECK(spec == doctest::Approx(l2_norm(f)).epsilon(1e-12));
    CHECK(l2_norm(reflect(f, 0.77)) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
    CHECK(sup_diff(ifft2(fft2(f)), f) < 1e-13);
}

TEST_CASE("invert_L o apply_L identity over 100 random admissible fields") {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Field2D f = random_admissible(g64, 12, 10, 1000 + trial);
        worst = std::max(worst, sup_diff(invert_L(apply_L(f)), f));
    }
    CHECK(worst < 1e-11);
}

TEST_CASE("deriv commutes with shift; reflect flips odd x-derivatives") {
    Field2D f = random_admissible(g64, 8, 8, 17);
    const double d = 0.41;
    CHECK(sup_diff(deriv(spectral_shift(f, d), 2, 1), spectral_shift(deriv(f, 2, 1), d)) < 1e-10);

    const double lam = 0.9;
    for (int px = 1; px <= 3; ++px) {
        Field2D lhs = deriv(reflect(f, lam), px, 0);
        Field2D rhs = ((px % 2 == 0) ? 1.0 : -1.0) * reflect(deriv(f, px, 0), lam);
        CHECK(sup_diff(lhs, rhs) < 1e-10 * std::max(1.0, max_abs(rhs)));
    }
}

TEST_CASE("dealiasing truncates the top third") {
    Field2D f = random_admissible(g64, g64.nx / 2 - 1, g64.ny / 2 - 1, 23);
    SpectralField2D c = fft2(dealias_23(f));
    for (int jy = 0; jy < g64.ny; ++jy)
        for (int jx = 0; jx < g64.nx; ++jx) {
            const int mx = std::abs(Grid2D::mode(jx, g64.nx));
            const int my = std::abs(Grid2D::mode(jy, g64.ny));
            if (mx > g64.nx / 3 || my > g64.ny / 3) CHECK(std::abs(c(jx, jy)) < 1e-10);
        }
}

TEST_CASE("admissibility bookkeeping") {
    Field2D f = fill(g64, [](double x, double y) { return std::sin(x) + 0.01 * std::cos(y); });
    CHECK(!is_admissible(f));
    project_zero_xmean(f);
    CHECK(is_admissible(f));
    CHECK(xmean_drift(f) < 1e-15);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chkp/analysis.hpp"
#include "chkp/spectral.hpp"
#include "test_support.hpp"

using namespace chkp;
using testutil::fill;
using testutil::random_admissible;

namespace {
const Grid2D g128(128, 16, 2.0 * M_PI, 2.0 * M_PI);

Field2D gaussian_bump(const Grid2D& g, double x0, double sx) {
    Field2D u = fill(g, [&](double x, double y) {
        double acc = 0.0;
        for (int p = -1; p <= 1; ++p) {
            const double d = x - x0 + p * g.lx;
            acc += std::exp(-0.5 * d * d / (sx * sx));
        }
        return acc * (1.0 + 0.4 * std::cos(y));
    });
    project_zero_xmean(u);
    return u;
}
}  // namespace

TEST_CASE("asymmetry: even bump about its center scores zero") {
    Field2D u = gaussian_bump(g128, 0.4 * g128.lx, 0.5);
    CHECK(asymmetry(u, 0.4 * g128.lx) < 1e-12);
}

TEST_CASE("asymmetry: odd function about 0 is maximal") {
    Field2D u = fill(g128, [](double x, double) { return std::sin(x); });
    CHECK(asymmetry(u, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("asymmetry: decreases monotonically toward the true axis") {
    const double x0 = 0.4 * g128.lx;
    Field2D u = gaussian_bump(g128, x0, 0.5);
    const double dx = g128.dx();
    double prev = asymmetry(u, x0 + 0.5 * dx);
    CHECK(prev > 0.0);
    for (double frac : {0.25, 0.125, 0.0625}) {
        const double a = asymmetry(u, x0 + frac * dx);
        CHECK(a < prev);
        prev = a;
    }
}

TEST_CASE("asymmetry: zero field is rejected") {
    CHECK_THROWS_WITH_AS(asymmetry(Field2D(g128), 0.0), "asymmetry: symmetry undefined for zero field",
                         std::invalid_argument);
}

TEST_CASE("asymmetry is invariant under joint shifts of field and axis") {
    Field2D u = random_admissible(g128, 6, 4, 3, 0.7);
    const double lam = 1.1, d = 0.37;
    CHECK(asymmetry(spectral_shift(u, d), lam + d) == doctest::Approx(asymmetry(u, lam)).epsilon(1e-10));
}

TEST_CASE("find_axis: construct-then-recover") {
    const double lam0 = 0.37 * g128.lx;
    Field2D base = random_admissible(g128, 10, 6, 5, 1.0);
    Field2D u = base + reflect(base, lam0);
    project_zero_xmean(u);
    auto [lam, score] = find_axis(u);
    CHECK(std::abs(lam - lam0) < 1e-8);
    CHECK(score < 1e-10);
}

TEST_CASE("find_axis: x-independent fields tie-break to zero") {
    Field2D u = fill(g128, [](double, double y) { return std::cos(y); });
    auto [lam, score] = find_axis(u);
    CHECK(lam == 0.0);
    CHECK(score < 1e-13);
}

TEST_CASE("find_axis: axis is reported modulo lx/2") {
    const double lam0 = 0.87 * g128.lx;  // equivalent axis at 0.37 lx
    Field2D base = random_admissible(g128, 10, 6, 7, 1.0);
    Field2D u = base + reflect(base, lam0);
    project_zero_xmean(u);
    auto [lam, score] = find_axis(u);
    CHECK(std::abs(lam - 0.37 * g128.lx) < 1e-8);
    CHECK(score < 1e-10);
}

TEST_CASE("estimate_speed: constructed sub-grid translate") {
    Field2D u = random_admissible(g128, 8, 5, 9, 1.0);
    const double shift = 1.25 * g128.dx();
    Snapshot s1{0.0, u};
    Snapshot s2{1.0, spectral_shift(u, shift)};
    CHECK(std::abs(estimate_speed(s1, s2) - shift) < 1e-8);
}

TEST_CASE("estimate_speed: identical snapshots give zero") {
    Field2D u = random_admissible(g128, 8, 5, 11, 1.0);
    CHECK(std::abs(estimate_speed({0.0, u}, {2.0, u})) < 1e-10);
}

TEST_CASE("estimate_speed: x-independent fields are rejected") {
    Field2D u = fill(g128, [](double, double y) { return std::sin(y); });
    CHECK_THROWS(estimate_speed({0.0, u}, {1.0, u}));
}

TEST_CASE("estimate_speed: sampled peakon ridge") {
    // closed-form peaked wave a e^{-|x + th y - c t|} sampled on a wide box;
    // the kink limits spectral fidelity (error ~ dx^2-ish), hence the wide grid
    const Grid2D g(8192, 16, 40.0, 8.0);
    const double a = 1.0, th = 0.25, c = 0.8;
    auto peakon_at = [&](double t) {
        Field2D u = fill(g, [&](double x, double y) {
            return a * std::exp(-std::abs(x - 0.5 * g.lx + th * (y - 0.5 * g.ly) - c * t));
        });
        return u;
    };
    Snapshot s1{0.0, peakon_at(0.0)};
    Snapshot s2{0.5, peakon_at(0.5)};
    CHECK(std::abs(estimate_speed(s1, s2) - c) < 1e-6);
}

TEST_CASE("steadiness_report: shifted-copies series is steady") {
    Field2D u = random_admissible(g128, 8, 5, 13, 1.0);
    const double c = 0.31;
    std::vector<Snapshot> series;
    for (int i = 0; i <= 4; ++i) {
        const double t = 0.5 * i;
        series.push_back({t, spectral_shift(u, c * t)});
    }
    auto rep = steadiness_report(series);
    CHECK(rep.verdict == "steady");
    CHECK(rep.speed_estimate == doctest::Approx(c).epsilon(1e-8));
    CHECK(rep.max_shape_error < 1e-10);
}

TEST_CASE("steadiness_report: accumulated shift survives a full transit") {
    // total displacement beyond one period; pairwise accumulation unwraps it
    Field2D u = random_admissible(g128, 8, 5, 15, 1.0);
    const double c = 0.31;
    std::vector<Snapshot> series;
    for (int i = 0; i <= 30; ++i) {
        const double t = i * (g128.lx / c) / 25.0;  // > 1 transit across the series
        series.push_back({t, spectral_shift(u, c * t)});
    }
    auto rep = steadiness_report(series);
    CHECK(rep.verdict == "steady");
    CHECK(rep.speed_estimate == doctest::Approx(c).epsilon(1e-8));
}

TEST_CASE("steadiness_report: deformed series is not steady") {
    Field2D u = random_admissible(g128, 8, 5, 17, 1.0);
    Field2D v = random_admissible(g128, 8, 5, 18, 1.0);
    std::vector<Snapshot> series;
    for (int i = 0; i <= 3; ++i) {
        const double t = 0.4 * i;
        Field2D f = spectral_shift(u, 0.2 * t) + (0.05 * t) * v;
        series.push_back({t, f});
    }
    auto rep = steadiness_report(series);
    CHECK(rep.verdict == "not-steady");
    CHECK(rep.max_shape_error > 1e-3);
}

TEST_CASE("steadiness_report: needs three snapshots") {
    Field2D u = random_admissible(g128, 4, 3, 19, 1.0);
    std::vector<Snapshot> two = {{0.0, u}, {1.0, u}};
    CHECK_THROWS(steadiness_report(two));
}

TEST_CASE("symmetry_report: affine axis track of a translating even field") {
    Field2D u = gaussian_bump(g128, 0.3 * g128.lx, 0.6);
    const double c = 0.45;
    std::vector<Snapshot> series;
    for (int i = 0; i <= 6; ++i) {
        const double t = 0.4 * i;
        series.push_back({t, spectral_shift(u, c * t)});
    }
    auto rep = symmetry_report(series);
    CHECK(rep.lambda_dot_estimate == doctest::Approx(c).epsilon(1e-6));
    CHECK(std::abs(rep.lambda_curvature) < 1e-6);
    for (auto [t, score] : rep.asymmetry_of_t) CHECK(score < 1e-10);
}

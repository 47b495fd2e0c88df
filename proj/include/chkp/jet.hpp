#pragma once

#include <array>
#include <cmath>

namespace chkp {

/// Truncated Taylor polynomial in one variable (coefficients f^(k)/k!),
/// order N. Gives machine-exact derivatives of closed-form 1D factors;
/// used for the compactly supported test functions and manufactured fields.
template <int N>
struct Jet {
    std::array<double, N + 1> a{};

    static Jet constant(double v) {
        Jet j;
        j.a[0] = v;
        return j;
    }
    static Jet variable(double v) {
        Jet j;
        j.a[0] = v;
        if constexpr (N >= 1) j.a[1] = 1.0;
        return j;
    }

    double derivative(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return a[k] * f;
    }

    Jet operator+(const Jet& o) const {
        Jet r;
        for (int k = 0; k <= N; ++k) r.a[k] = a[k] + o.a[k];
        return r;
    }
    Jet operator-(const Jet& o) const {
        Jet r;
        for (int k = 0; k <= N; ++k) r.a[k] = a[k] - o.a[k];
        return r;
    }
    Jet operator*(const Jet& o) const {
        Jet r;
        for (int k = 0; k <= N; ++k)
            for (int j = 0; j <= k; ++j) r.a[k] += a[j] * o.a[k - j];
        return r;
    }
    Jet operator*(double s) const {
        Jet r;
        for (int k = 0; k <= N; ++k) r.a[k] = a[k] * s;
        return r;
    }
    Jet operator-() const { return *this * -1.0; }

    friend Jet reciprocal(const Jet& f) {
        Jet r;
        r.a[0] = 1.0 / f.a[0];
        for (int k = 1; k <= N; ++k) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += f.a[j] * r.a[k - j];
            r.a[k] = -s * r.a[0];
        }
        return r;
    }

    friend Jet exp(const Jet& f) {
        Jet r;
        r.a[0] = std::exp(f.a[0]);
        for (int k = 1; k <= N; ++k) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += j * f.a[j] * r.a[k - j];
            r.a[k] = s / k;
        }
        return r;
    }

    // simultaneous sin/cos of a jet argument
    friend void sincos(const Jet& f, Jet& s, Jet& c) {
        s = Jet{};
        c = Jet{};
        s.a[0] = std::sin(f.a[0]);
        c.a[0] = std::cos(f.a[0]);
        for (int k = 1; k <= N; ++k) {
            double ss = 0.0, cc = 0.0;
            for (int j = 1; j <= k; ++j) {
                ss += j * f.a[j] * c.a[k - j];
                cc += j * f.a[j] * s.a[k - j];
            }
            s.a[k] = ss / k;
            c.a[k] = -cc / k;
        }
    }
};

using Jet4 = Jet<4>;

/// 1D C-infinity hat B(s) = exp(-1/(1-s^2)) for |s|<1, else 0, as a jet in s.
inline Jet4 bump_jet(double s) {
    if (std::abs(s) >= 1.0 - 1e-9) return Jet4{};  // all derivatives vanish
    Jet4 js = Jet4::variable(s);
    Jet4 t = Jet4::constant(1.0) - js * js;
    return exp(-reciprocal(t));
}

/// Gaussian exp(-s^2/2) as a jet.
inline Jet4 gaussian_jet(double s) {
    Jet4 js = Jet4::variable(s);
    return exp(js * js * -0.5);
}

}  // namespace chkp

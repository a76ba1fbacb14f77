#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "wpdi/errors.hpp"

namespace wpdi {

/// Value and partial derivatives of a scalar function of (x, y) at a point,
/// truncated at order 2. `dxy` is the single mixed partial. A jet whose
/// evaluation left the smooth domain carries the `singular` marker instead
/// of finite fields; arithmetic propagates the marker.
struct Jet2 {
    double v = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double dxx = 0.0;
    double dxy = 0.0;
    double dyy = 0.0;
    bool singular = false;

    static Jet2 marked_singular() {
        const double n = std::numeric_limits<double>::quiet_NaN();
        return {n, n, n, n, n, n, true};
    }
};

/// Value, first, second derivative of a univariate profile.
struct Jet1 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    bool singular = false;
};

inline Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0, false}; }

inline Jet2 seed_x(double px) { return {px, 1, 0, 0, 0, 0, false}; }
inline Jet2 seed_y(double py) { return {py, 0, 1, 0, 0, 0, false}; }

/// Coordinate seeds at (px, py): x-jet with dx = 1, y-jet with dy = 1.
inline std::pair<Jet2, Jet2> seed(double px, double py) {
    return {seed_x(px), seed_y(py)};
}

inline Jet2 operator-(const Jet2& a) {
    if (a.singular) return a;
    return {-a.v, -a.dx, -a.dy, -a.dxx, -a.dxy, -a.dyy, false};
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
    if (a.singular || b.singular) return Jet2::marked_singular();
    return {a.v + b.v, a.dx + b.dx, a.dy + b.dy, a.dxx + b.dxx, a.dxy + b.dxy, a.dyy + b.dyy, false};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
    if (a.singular || b.singular) return Jet2::marked_singular();
    return {a.v - b.v, a.dx - b.dx, a.dy - b.dy, a.dxx - b.dxx, a.dxy - b.dxy, a.dyy - b.dyy, false};
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    if (a.singular || b.singular) return Jet2::marked_singular();
    Jet2 r;
    r.v = a.v * b.v;
    r.dx = a.dx * b.v + a.v * b.dx;
    r.dy = a.dy * b.v + a.v * b.dy;
    r.dxx = a.dxx * b.v + 2.0 * a.dx * b.dx + a.v * b.dxx;
    r.dxy = a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy;
    r.dyy = a.dyy * b.v + 2.0 * a.dy * b.dy + a.v * b.dyy;
    return r;
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (a.singular || b.singular) return Jet2::marked_singular();
    if (b.v == 0.0) throw DivisionByZero("jet division by zero value");
    // Reciprocal of b to order 2, then one product.
    const double iv = 1.0 / b.v;
    const double iv2 = iv * iv;
    const double iv3 = iv2 * iv;
    Jet2 r;
    r.v = iv;
    r.dx = -b.dx * iv2;
    r.dy = -b.dy * iv2;
    r.dxx = (2.0 * b.dx * b.dx - b.v * b.dxx) * iv3;
    r.dxy = (2.0 * b.dx * b.dy - b.v * b.dxy) * iv3;
    r.dyy = (2.0 * b.dy * b.dy - b.v * b.dyy) * iv3;
    return a * r;
}

inline Jet2 operator+(const Jet2& a, double c) { return a + constant(c); }
inline Jet2 operator+(double c, const Jet2& a) { return constant(c) + a; }
inline Jet2 operator-(const Jet2& a, double c) { return a - constant(c); }
inline Jet2 operator-(double c, const Jet2& a) { return constant(c) - a; }
inline Jet2 operator*(const Jet2& a, double c) { return a * constant(c); }
inline Jet2 operator*(double c, const Jet2& a) { return constant(c) * a; }
inline Jet2 operator/(const Jet2& a, double c) { return a / constant(c); }
inline Jet2 operator/(double c, const Jet2& a) { return constant(c) / a; }

namespace detail {

/// Chain rule for g applied to inner, given g, g', g'' at inner.v.
inline Jet2 chain(const Jet2& inner, double g0, double g1, double g2) {
    Jet2 r;
    r.v = g0;
    r.dx = g1 * inner.dx;
    r.dy = g1 * inner.dy;
    r.dxx = g2 * inner.dx * inner.dx + g1 * inner.dxx;
    r.dxy = g2 * inner.dx * inner.dy + g1 * inner.dxy;
    r.dyy = g2 * inner.dy * inner.dy + g1 * inner.dyy;
    return r;
}

inline bool is_integer(double r) { return r == std::nearbyint(r) && std::abs(r) < 1e15; }

}  // namespace detail

/// a^r for constant r. Smooth for a.v > 0 and for integer r; the locus
/// a.v = 0 with r < 2 (fractional or negative powers) yields the singular
/// marker, which callers branch on.
inline Jet2 pow_const(const Jet2& a, double r) {
    if (a.singular) return a;
    if (a.v > 0.0) {
        const double g0 = std::pow(a.v, r);
        const double g1 = r * std::pow(a.v, r - 1.0);
        const double g2 = r * (r - 1.0) * std::pow(a.v, r - 2.0);
        return detail::chain(a, g0, g1, g2);
    }
    if (a.v == 0.0) {
        if (r >= 2.0) {
            return detail::chain(a, 0.0, 0.0, r == 2.0 ? 2.0 : 0.0);
        }
        return Jet2::marked_singular();
    }
    if (detail::is_integer(r)) {
        const double g0 = std::pow(a.v, r);
        const double g1 = r * std::pow(a.v, r - 1.0);
        const double g2 = r * (r - 1.0) * std::pow(a.v, r - 2.0);
        return detail::chain(a, g0, g1, g2);
    }
    return Jet2::marked_singular();
}

inline Jet2 sqrt_jet(const Jet2& a) {
    if (a.singular) return a;
    if (a.v < 0.0) throw DomainError("sqrt of negative value");
    return pow_const(a, 0.5);
}

inline Jet2 exp_jet(const Jet2& a) {
    if (a.singular) return a;
    const double e = std::exp(a.v);
    return detail::chain(a, e, e, e);
}

inline Jet2 log_jet(const Jet2& a) {
    if (a.singular) return a;
    if (a.v <= 0.0) throw DomainError("log of nonpositive value");
    return detail::chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}

/// Second-order chain rule for a univariate profile h evaluated along an
/// inner function of (x, y). `hj` must be the jet of h at inner.v.
inline Jet2 compose_univariate(const Jet1& hj, const Jet2& inner) {
    if (hj.singular || inner.singular) return Jet2::marked_singular();
    return detail::chain(inner, hj.v, hj.d1, hj.d2);
}

// --- univariate jets, same rules one dimension down ---

inline Jet1 constant1(double c) { return {c, 0, 0, false}; }
inline Jet1 seed_z(double pz) { return {pz, 1, 0, false}; }

inline Jet1 operator-(const Jet1& a) { return {-a.v, -a.d1, -a.d2, a.singular}; }

inline Jet1 operator+(const Jet1& a, const Jet1& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.singular || b.singular};
}

inline Jet1 operator-(const Jet1& a, const Jet1& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.singular || b.singular};
}

inline Jet1 operator*(const Jet1& a, const Jet1& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            a.singular || b.singular};
}

inline Jet1 operator/(const Jet1& a, const Jet1& b) {
    if (a.singular || b.singular) return {0, 0, 0, true};
    if (b.v == 0.0) throw DivisionByZero("jet division by zero value");
    const double iv = 1.0 / b.v;
    const Jet1 r{iv, -b.d1 * iv * iv, (2.0 * b.d1 * b.d1 - b.v * b.d2) * iv * iv * iv, false};
    return a * r;
}

inline Jet1 pow_const(const Jet1& a, double r) {
    if (a.singular) return a;
    auto chain1 = [&](double g0, double g1, double g2) {
        return Jet1{g0, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2, false};
    };
    if (a.v > 0.0) {
        return chain1(std::pow(a.v, r), r * std::pow(a.v, r - 1.0),
                      r * (r - 1.0) * std::pow(a.v, r - 2.0));
    }
    if (a.v == 0.0) {
        if (r >= 2.0) return chain1(0.0, 0.0, r == 2.0 ? 2.0 : 0.0);
        return {0, 0, 0, true};
    }
    if (detail::is_integer(r)) {
        return chain1(std::pow(a.v, r), r * std::pow(a.v, r - 1.0),
                      r * (r - 1.0) * std::pow(a.v, r - 2.0));
    }
    return {0, 0, 0, true};
}

inline Jet1 sqrt_jet(const Jet1& a) {
    if (a.singular) return a;
    if (a.v < 0.0) throw DomainError("sqrt of negative value");
    return pow_const(a, 0.5);
}

inline Jet1 exp_jet(const Jet1& a) {
    const double e = std::exp(a.v);
    return {e, e * a.d1, e * a.d1 * a.d1 + e * a.d2, a.singular};
}

inline Jet1 log_jet(const Jet1& a) {
    if (a.singular) return a;
    if (a.v <= 0.0) throw DomainError("log of nonpositive value");
    const double g1 = 1.0 / a.v;
    return {std::log(a.v), g1 * a.d1, -g1 * g1 * a.d1 * a.d1 + g1 * a.d2, false};
}

}  // namespace wpdi

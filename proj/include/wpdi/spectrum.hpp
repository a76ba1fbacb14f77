#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wpdi/errors.hpp"
#include "wpdi/rng.hpp"

namespace wpdi {

inline const double kSqrt6 = std::sqrt(6.0);

/// Largest value of z = x^{-3/2} y on the region x^3 >= 54 y^2.
inline const double kZMax = 1.0 / (3.0 * kSqrt6);

/// Ordered traceless eigenvalue triple: l1 <= l2 <= l3, l1 + l2 + l3 = 0.
/// Build through from_eigenvalues / from_invariants to get the invariant
/// enforced; the algebra below assumes it.
struct Spectrum {
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
};

/// The two nontrivial symmetric invariants and their scale-free ratio.
/// z = x^{-3/2} y is only defined away from x = 0.
struct InvariantPoint {
    double x = 0.0;
    double y = 0.0;
    std::optional<double> z;
};

struct Region {
    enum class Kind { omega, omega_delta, omega_zero };

    Kind kind = Kind::omega;
    double delta = 0.0;

    static Region omega() { return {Kind::omega, 0.0}; }
    static Region omega_delta(double d) {
        if (!(d > 0.0)) throw std::invalid_argument("omega_delta requires delta > 0");
        return {Kind::omega_delta, d};
    }
    static Region omega_zero() { return {Kind::omega_zero, 0.0}; }

    bool contains(double x, double y, double rel_tol = 1e-9) const {
        const double slack = rel_tol * std::max(1.0, std::abs(x * x * x));
        if (x < -slack) return false;
        if (54.0 * y * y > x * x * x + slack) return false;
        switch (kind) {
            case Kind::omega: return true;
            case Kind::omega_delta: return y >= delta - slack;
            case Kind::omega_zero: return x > 0.0 && y >= -slack;
        }
        return false;
    }
};

namespace detail {

/// Real roots of t^3 + p t + q = 0, ascending, for the three-real-root case
/// (acos argument clamped at the discriminant boundary).
inline std::array<double, 3> depressed_cubic_roots(double p, double q) {
    if (p >= 0.0) {
        // Only reachable here with p ~ 0 (triple root at the region tip).
        const double r = std::cbrt(-q);
        return {r, r, r};
    }
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double c = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(c);
    std::array<double, 3> roots{};
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (int k = 0; k < 3; ++k) {
        roots[static_cast<std::size_t>(k)] = m * std::cos((theta - kTwoPi * k) / 3.0);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace detail

/// Sort and recenter a raw triple. Inputs whose trace is small relative to
/// their magnitude are repaired by subtracting the mean; anything worse is
/// rejected.
inline Spectrum from_eigenvalues(double a, double b, double c) {
    const double trace = a + b + c;
    const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    if (std::abs(trace) > 1e-9 * scale) {
        throw TraceError("eigenvalue triple has nonzero trace " + std::to_string(trace));
    }
    const double mean = trace / 3.0;
    std::array<double, 3> v{a - mean, b - mean, c - mean};
    std::sort(v.begin(), v.end());
    return {v[0], v[1], v[2]};
}

inline InvariantPoint invariants(const Spectrum& s) {
    InvariantPoint p;
    p.x = s.l1 * s.l1 + s.l2 * s.l2 + s.l3 * s.l3;
    p.y = s.l1 * s.l2 * s.l3;
    if (p.x > 0.0) p.z = p.y * std::pow(p.x, -1.5);
    return p;
}

/// Invert (x, y) to the spectrum with those invariants: the roots of
/// t^3 - (x/2) t - y = 0, via the trigonometric form.
inline Spectrum from_invariants(double x, double y) {
    const double x3 = x * x * x;
    const double slack = 1e-9 * std::max(1.0, std::abs(x3));
    if (x < -slack || 54.0 * y * y > x3 + slack) {
        throw RegionError("(x, y) outside x^3 >= 54 y^2");
    }
    if (x <= 0.0) return {0.0, 0.0, 0.0};
    const auto roots = detail::depressed_cubic_roots(-x / 2.0, -y);
    return {roots[0], roots[1], roots[2]};
}

inline Spectrum from_invariants(const InvariantPoint& p) { return from_invariants(p.x, p.y); }

struct AlgebraicBound {
    double lhs = 0.0;  // 3 sqrt(6) |y|
    double rhs = 0.0;  // x^{3/2}
    bool equality = false;
};

/// The pointwise bound 3 sqrt(6) |det| <= |.|^3 with its equality flag.
inline AlgebraicBound algebraic_bound(const Spectrum& s) {
    const InvariantPoint p = invariants(s);
    AlgebraicBound b;
    b.lhs = 3.0 * kSqrt6 * std::abs(p.y);
    b.rhs = std::pow(p.x, 1.5);
    if (b.lhs > b.rhs + 1e-10) {
        throw Error("algebraic bound violated: spectrum does not satisfy the trace invariant");
    }
    b.equality = std::abs(b.lhs - b.rhs) <= 1e-10 * std::max(1.0, b.rhs);
    return b;
}

/// Number of eigenvalue clusters under the given gap tolerance.
inline int spectrum_count(const Spectrum& s, double tol) {
    if (tol < 0.0) throw std::invalid_argument("spectrum_count requires tol >= 0");
    int n = 1;
    if (s.l2 - s.l1 > tol) ++n;
    if (s.l3 - s.l2 > tol) ++n;
    return n;
}

/// Residual of 2 prod (li - lj)^2 = x^3 - 54 y^2.
inline double discriminant_identity(const Spectrum& s) {
    const InvariantPoint p = invariants(s);
    const double d12 = s.l1 - s.l2;
    const double d23 = s.l2 - s.l3;
    const double d31 = s.l3 - s.l1;
    const double lhs = 2.0 * d12 * d12 * d23 * d23 * d31 * d31;
    const double rhs = p.x * p.x * p.x - 54.0 * p.y * p.y;
    return std::abs(lhs - rhs);
}

struct SampleOptions {
    double x_min = 0.5;
    double x_max = 6.0;
};

/// Deterministic spectra with invariants in the region, parametrized by
/// (x, z) so boundary neighborhoods are reachable uniformly in z.
inline std::vector<Spectrum> sample(const Region& region, int count, std::uint64_t seed,
                                    const SampleOptions& opts = {}) {
    if (count < 1) throw std::invalid_argument("sample requires count >= 1");
    double x_lo = opts.x_min;
    const double x_hi = opts.x_max;
    if (region.kind == Region::Kind::omega_delta) {
        // y >= delta reachable only where x^{3/2} >= delta / z_max.
        x_lo = std::max(x_lo, std::pow(region.delta / kZMax, 2.0 / 3.0));
        if (x_lo > x_hi) {
            throw RegionError("omega_delta delta incompatible with sampler x-range");
        }
    }
    Rng rng(seed);
    std::vector<Spectrum> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double x = rng.uniform(x_lo, x_hi);
        double z_lo = -kZMax;
        double z_hi = kZMax;
        switch (region.kind) {
            case Region::Kind::omega: break;
            case Region::Kind::omega_zero: z_lo = 0.0; break;
            case Region::Kind::omega_delta: z_lo = region.delta * std::pow(x, -1.5); break;
        }
        const double z = rng.uniform(z_lo, z_hi);
        out.push_back(from_invariants(x, z * std::pow(x, 1.5)));
    }
    return out;
}

}  // namespace wpdi

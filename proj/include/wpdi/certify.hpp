#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "wpdi/errors.hpp"
#include "wpdi/funcdsl.hpp"
#include "wpdi/pdi.hpp"
#include "wpdi/spectrum.hpp"

namespace wpdi {

// ---------------------------------------------------------------------------
// Candidate family x^{1/6} (1 - 54 z^2)^k
// ---------------------------------------------------------------------------

/// Bracket of the second inequality, as a function of w = z^2. Increasing
/// in w for k >= 1.
inline double fk_i2_bracket(std::int64_t k, double w) {
    const double kd = static_cast<double>(k);
    return 54.0 * (18.0 * kd - 1.0) * (18.0 * kd + 7.0) * w - (162.0 * kd - 7.0);
}

/// Bracket of the third inequality, an upward parabola in w = z^2.
inline double fk_i3_bracket(std::int64_t k, double w) {
    const double kd = static_cast<double>(k);
    const double a = 2916.0 * (18.0 * kd - 1.0) * (18.0 * kd - 1.0) * (18.0 * kd + 5.0);
    const double b = 108.0 * (1944.0 * kd * kd - 162.0 * kd + 5.0);
    const double c = 162.0 * kd - 5.0;
    return a * w * w - b * w - c;
}

/// Closed-form values of the inequality system for f = x^{1/6}(1-54z^2)^k.
/// The fourth value is identically zero for this family.
inline PdiValues fk_brackets(std::int64_t k, double R, double x, double z) {
    if (k < 1) throw std::invalid_argument("fk_brackets requires k >= 1");
    if (!(x > 0.0)) throw std::invalid_argument("fk_brackets requires x > 0");
    if (std::abs(z) > kZMax * (1.0 + 1e-12)) {
        throw std::invalid_argument("fk_brackets requires |z| <= 1/(3 sqrt 6)");
    }
    const double kd = static_cast<double>(k);
    const double u = 1.0 - 54.0 * z * z;
    const double w = z * z;
    PdiValues v;
    v.I1 = (1.0 / 6.0) * std::pow(x, 1.0 / 6.0) * std::pow(u, kd) *
           (R + 36.0 * (18.0 * kd - 1.0) * z * std::sqrt(x));
    v.I2 = (2.0 / 3.0) * std::pow(x, -5.0 / 6.0) * std::pow(u, kd - 1.0) * fk_i2_bracket(k, w);
    v.I3 = (2.0 / 9.0) * std::pow(x, -5.0 / 3.0) * std::pow(u, 2.0 * kd - 2.0) * fk_i3_bracket(k, w);
    v.I4 = 0.0;
    return v;
}

/// Compares fk_brackets against the generic closed forms fed by jet
/// evaluation of the parsed expression, over seeded interior points.
/// Returns the max normalized deviation.
inline double fk_crosscheck(std::int64_t k, double R, int points, std::uint64_t seed) {
    if (points < 1) throw std::invalid_argument("fk_crosscheck requires points >= 1");
    const ExprAst ast =
        parse("x^(1/6)*(1-54*z^2)^" + std::to_string(k), ExprMode::FunctionXY);
    Rng rng(seed);
    const PdiContext ctx{R};
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = rng.uniform(0.5, 3.0);
        const double z = rng.uniform(-0.95 * kZMax, 0.95 * kZMax);
        const double y = z * std::pow(x, 1.5);
        const Jet2 j = eval_jet(ast, x, y);
        PdiScales scales;
        const PdiValues closed = closed_form(x, y, j, ctx, &scales);
        const PdiValues br = fk_brackets(k, R, x, y * std::pow(x, -1.5));
        auto dev = [](double a, double b, double s) {
            const double d = std::abs(a - b);
            if (d == 0.0) return 0.0;
            return d / std::max({std::abs(a), std::abs(b), s, 1e-300});
        };
        worst = std::max({worst, dev(closed.I1, br.I1, scales.s1), dev(closed.I2, br.I2, scales.s2),
                          dev(closed.I3, br.I3, scales.s3), dev(closed.I4, 0.0, scales.s4)});
    }
    return worst;
}

/// Certificate configuration: exponent k together with the subregion
/// bounds delta1 <= z, delta2 <= x^{-1} y and the curvature bound R.
struct FkParams {
    std::int64_t k = 1;
    double R = 0.0;
    double delta1 = kZMax;
    double delta2 = kZMax;
};

inline FkParams make_fk_params(std::int64_t k, double R, double delta1, double delta2) {
    if (k < 1) throw std::invalid_argument("fk params require k >= 1");
    if (!(delta1 > 0.0) || delta1 > kZMax * (1.0 + 1e-12)) {
        throw std::invalid_argument("fk params require 0 < delta1 <= 1/(3 sqrt 6)");
    }
    if (!(delta2 > 0.0)) throw std::invalid_argument("fk params require delta2 > 0");
    return {k, R, delta1, delta2};
}

/// Whether the three brackets are nonnegative throughout the configured
/// subregion. Minima are evaluated exactly: the second bracket at its left
/// endpoint (it increases in z^2), the third at the interval endpoints and
/// interior vertex of its upward parabola.
inline bool fk_certificate_holds(const FkParams& p) {
    const double kd = static_cast<double>(p.k);
    if (p.R + 36.0 * (18.0 * kd - 1.0) * p.delta2 < 0.0) return false;
    const double w_hi = 1.0 / 54.0;
    const double w_lo = std::min(p.delta1 * p.delta1, w_hi);
    if (fk_i2_bracket(p.k, w_lo) < 0.0) return false;
    double i3_min = std::min(fk_i3_bracket(p.k, w_lo), fk_i3_bracket(p.k, w_hi));
    const double a = 2916.0 * (18.0 * kd - 1.0) * (18.0 * kd - 1.0) * (18.0 * kd + 5.0);
    const double b = 108.0 * (1944.0 * kd * kd - 162.0 * kd + 5.0);
    const double wv = b / (2.0 * a);
    if (wv > w_lo && wv < w_hi) i3_min = std::min(i3_min, fk_i3_bracket(p.k, wv));
    return i3_min >= 0.0;
}

/// Smallest k >= 1 whose certificate holds for the given bounds. Starts at
/// the exact inversion of the curvature condition and scans upward with a
/// bounded budget.
inline std::int64_t fk_min_k(double delta1, double delta2, double rmin) {
    std::int64_t k = 1;
    if (rmin < 0.0) {
        if (!(delta2 > 0.0)) throw std::invalid_argument("fk params require delta2 > 0");
        const double ka = (1.0 + (-rmin) / (36.0 * delta2)) / 18.0;
        if (ka > 1.0) k = static_cast<std::int64_t>(std::ceil(ka));
    }
    for (std::int64_t iter = 0; iter < 1000000; ++iter, ++k) {
        if (fk_certificate_holds(make_fk_params(k, rmin, delta1, delta2))) return k;
    }
    throw NoSolution("no admissible k within the scan budget");
}

// ---------------------------------------------------------------------------
// Profile-family forms: f = x^{1/6} h(z)
// ---------------------------------------------------------------------------

struct ProfileBrackets {
    double I1 = 0, I2 = 0, I3 = 0;
};

/// The three closed forms for f = x^{1/6} h(z) after the substitution
/// h' = (1-54z^2)^{-1} phi h. `hp` enters only through phi and is accepted
/// for call-site symmetry.
inline ProfileBrackets profile_brackets(double z, double h, double hp, double phi, double phip, double x,
                                  double R) {
    (void)hp;
    if (!(x > 0.0)) throw std::invalid_argument("profile_brackets requires x > 0");
    if (h < 0.0) throw std::invalid_argument("profile_brackets requires h >= 0");
    if (z < 0.0 || z >= kZMax) throw std::invalid_argument("profile_brackets requires z in [0, z_max)");
    const double u = 1.0 - 54.0 * z * z;
    ProfileBrackets v;
    v.I1 = (1.0 / 6.0) * h * std::pow(x, 1.0 / 6.0) * (R - 6.0 * std::sqrt(x) * (phi + 6.0 * z));
    v.I2 = (1.0 / 3.0) * h * std::pow(x, -5.0 / 6.0) / u *
           (3.0 * u * phip + 3.0 * phi * phi + 54.0 * z * phi + 14.0 * u);
    v.I3 = (1.0 / 9.0) * h * h * std::pow(x, -5.0 / 3.0) / (u * u) *
           (3.0 * u * (u - 9.0 * z * phi) * phip - 27.0 * z * phi * phi * phi -
            9.0 * (1.0 + 108.0 * z * z) * phi * phi + 10.0 * u * u);
    return v;
}

/// Bracket-level identity linking the second and third forms:
/// (u - 9 z phi) i2 - i3 = 12 phi^2 + 4 (u - 9 z phi)^2, with u = 1 - 54 z^2.
/// The phi' contributions cancel exactly. Returns |LHS - RHS|.
inline double profile_bracket_identity(double z, double phi, double phip) {
    if (z < 0.0 || z >= kZMax) throw std::invalid_argument("profile_bracket_identity requires z in [0, z_max)");
    const double u = 1.0 - 54.0 * z * z;
    const double m = u - 9.0 * z * phi;
    const double i2 = 3.0 * u * phip + 3.0 * phi * phi + 54.0 * z * phi + 14.0 * u;
    const double i3 = 3.0 * u * m * phip - 27.0 * z * phi * phi * phi -
                      9.0 * (1.0 + 108.0 * z * z) * phi * phi + 10.0 * u * u;
    const double lhs = m * i2 - i3;
    const double rhs = 12.0 * phi * phi + 4.0 * m * m;
    return std::abs(lhs - rhs);
}

/// First form in the scalar-flat case: I1 = -h x^{2/3} psi, nonnegative
/// whenever psi <= 0. z enters only through psi.
inline double scalar_flat_i1(double z, double h, double psi, double x) {
    (void)z;
    if (!(x > 0.0)) throw std::invalid_argument("scalar_flat_i1 requires x > 0");
    if (h < 0.0) throw std::invalid_argument("scalar_flat_i1 requires h >= 0");
    return -h * std::pow(x, 2.0 / 3.0) * psi;
}

// ---------------------------------------------------------------------------
// Refined Kato derivative part
// ---------------------------------------------------------------------------

/// p = |grad |W||^2, q = |grad W|^2, constrained by q >= (5/3) p.
struct KatoPoint {
    double p = 0, q = 0, x = 1;
};

inline KatoPoint make_kato_point(double p, double q, double x) {
    if (p < 0.0) throw std::invalid_argument("kato point requires p >= 0");
    if (!(x > 0.0)) throw std::invalid_argument("kato point requires x > 0");
    if (q + 1e-9 * std::max(1.0, std::abs(q)) < (5.0 / 3.0) * p) {
        throw std::invalid_argument("kato point requires q >= (5/3) p");
    }
    return {p, q, x};
}

/// Derivative part of the Laplacian of x^alpha:
/// 2 q alpha x^{alpha-1} + 4 x p alpha (alpha-1) x^{alpha-2}
/// = 2 alpha x^{alpha-1} (q + p (2 alpha - 2)).
/// The grouping keeps the factor exactly zero at q = (5/3) p, alpha = 1/6.
inline double kato_delta_d(double alpha, const KatoPoint& kp) {
    return 2.0 * alpha * std::pow(kp.x, alpha - 1.0) * (kp.q + kp.p * (2.0 * alpha - 2.0));
}

struct KatoMinimality {
    bool nonnegative_for_all = false;
    KatoPoint counterexample;  // meaningful only when !nonnegative_for_all
    double value = 0.0;        // kato_delta_d at the counterexample
};

/// Decides whether x^alpha has nonnegative derivative part for every
/// constraint-satisfying point. The minimizing direction is q = (5/3) p, so
/// one evaluation there settles it.
inline KatoMinimality kato_minimality(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("kato_minimality requires alpha > 0");
    const KatoPoint edge{1.0, 5.0 / 3.0, 1.0};
    const double value = kato_delta_d(alpha, edge);
    KatoMinimality r;
    if (value < 0.0) {
        r.nonnegative_for_all = false;
        r.counterexample = edge;
        r.value = value;
    } else {
        r.nonnegative_for_all = true;
    }
    return r;
}

}  // namespace wpdi

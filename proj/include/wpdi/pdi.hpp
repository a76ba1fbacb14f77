#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wpdi/errors.hpp"
#include "wpdi/jet.hpp"
#include "wpdi/rng.hpp"
#include "wpdi/spectrum.hpp"

namespace wpdi {

/// Scalar curvature enters the inequalities only as a constant parameter.
struct PdiContext {
    double R = 0.0;
};

/// Coefficients of |X|^2, |Y|^2, |Z|^2 and (half) the cross terms in the
/// Laplacian expansion.
struct QFormCoeffs {
    double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;
};

struct PdiValues {
    double I1 = 0, I2 = 0, I3 = 0, I4 = 0;
};

/// Largest absolute monomial entering each of I1..I4; used to normalize
/// residuals so tolerances are scale-free.
struct PdiScales {
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
};

/// Pairwise principal 2x2 minors and the determinant of the coefficient
/// matrix [[A,D,E],[D,B,F],[E,F,C]].
struct SylvesterMinors {
    double I31 = 0, I32 = 0, I33 = 0;
    double I4 = 0;
};

/// Gram data of the three vector fields; entries must assemble to a PSD
/// matrix for the triple to be realizable.
struct VectorTriple {
    double xx = 0, yy = 0, zz = 0;  // |X|^2, |Y|^2, |Z|^2
    double xy = 0, xz = 0, yz = 0;  // <X,Y>, <X,Z>, <Y,Z>
};

namespace detail {

/// Smallest eigenvalue of a symmetric 3x3 matrix, via trace shift and the
/// trigonometric cubic.
inline double sym3_min_eigenvalue(double a11, double a22, double a33, double a12, double a13,
                                  double a23) {
    const double m = (a11 + a22 + a33) / 3.0;
    const double b11 = a11 - m, b22 = a22 - m, b33 = a33 - m;
    const double p2 = b11 * b11 + b22 * b22 + b33 * b33 +
                      2.0 * (a12 * a12 + a13 * a13 + a23 * a23);
    if (p2 == 0.0) return m;
    const double det = b11 * (b22 * b33 - a23 * a23) - a12 * (a12 * b33 - a23 * a13) +
                       a13 * (a12 * a23 - b22 * a13);
    const auto roots = depressed_cubic_roots(-p2 / 2.0, -det);
    return roots[0] + m;
}

inline bool jet_finite(const Jet2& j) {
    return !j.singular && std::isfinite(j.v) && std::isfinite(j.dx) && std::isfinite(j.dy) &&
           std::isfinite(j.dxx) && std::isfinite(j.dxy) && std::isfinite(j.dyy);
}

}  // namespace detail

struct CoefficientForm {
    QFormCoeffs coeffs;
    double II = 0.0;  // (Rx - 36y) f_x + (3/2 Ry - x^2) f_y
};

/// A..F of the Laplacian expansion at the given spectrum, plus the pure
/// curvature part II.
inline CoefficientForm coefficient_form(const Spectrum& s, const Jet2& j, const PdiContext& ctx) {
    if (!detail::jet_finite(j)) throw std::invalid_argument("coefficient_form requires a finite jet");
    const double l1 = s.l1, l2 = s.l2, l3 = s.l3;
    const double d12 = l1 - l2, d23 = l2 - l3, d31 = l3 - l1;
    const double fx = j.dx, fy = j.dy, fxx = j.dxx, fxy = j.dxy, fyy = j.dyy;

    QFormCoeffs c;
    c.A = 8.0 * fx - 4.0 * l3 * fy + d12 * d12 * (4.0 * fxx + l3 * l3 * fyy - 4.0 * l3 * fxy);
    c.B = 8.0 * fx - 4.0 * l1 * fy + d23 * d23 * (4.0 * fxx + l1 * l1 * fyy - 4.0 * l1 * fxy);
    c.C = 8.0 * fx - 4.0 * l2 * fy + d31 * d31 * (4.0 * fxx + l2 * l2 * fyy - 4.0 * l2 * fxy);
    c.D = -2.0 * fx - 2.0 * l2 * fy + d12 * d23 * (4.0 * fxx + l1 * l3 * fyy + 2.0 * l2 * fxy);
    c.E = -2.0 * fx - 2.0 * l1 * fy + d12 * d31 * (4.0 * fxx + l2 * l3 * fyy + 2.0 * l1 * fxy);
    c.F = -2.0 * fx - 2.0 * l3 * fy + d23 * d31 * (4.0 * fxx + l1 * l2 * fyy + 2.0 * l3 * fxy);

    const InvariantPoint p = invariants(s);
    const double II =
        (ctx.R * p.x - 36.0 * p.y) * fx + (1.5 * ctx.R * p.y - p.x * p.x) * fy;
    return {c, II};
}

/// The four closed-form polynomials of the inequality system, evaluated
/// verbatim. `scales` (optional) receives the largest absolute monomial per
/// value.
inline PdiValues closed_form(double x, double y, const Jet2& j, const PdiContext& ctx,
                             PdiScales* scales = nullptr) {
    if (!detail::jet_finite(j)) throw std::invalid_argument("closed_form requires a finite jet");
    if (!Region::omega().contains(x, y)) throw RegionError("closed_form point outside region");
    const double fx = j.dx, fy = j.dy, fxx = j.dxx, fxy = j.dxy, fyy = j.dyy;
    const double R = ctx.R;
    const double x2 = x * x, x3 = x * x * x, y2 = y * y;
    const double disc = x3 - 54.0 * y2;
    const double hess = fxx * fyy - fxy * fxy;

    PdiValues v;
    v.I1 = (R * x - 36.0 * y) * fx + (1.5 * R * y - x2) * fy;
    v.I2 = 24.0 * x * fxx + 72.0 * y * fxy + x2 * fyy + 48.0 * fx;
    v.I3 = 6.0 * disc * hess + 24.0 * (7.0 * x * fx - 12.0 * y * fy) * fxx +
           8.0 * (63.0 * y * fx - 2.0 * x2 * fy) * fxy + x * (7.0 * x * fx - 12.0 * y * fy) * fyy +
           180.0 * fx * fx - 12.0 * x * fy * fy;
    v.I4 = 6.0 * disc * hess * fx +
           4.0 * (30.0 * x * fx * fx - 72.0 * y * fx * fy - x2 * fy * fy) * fxx +
           4.0 * (90.0 * y * fx * fx - 4.0 * x2 * fx * fy - 3.0 * x * y * fy * fy) * fxy +
           (5.0 * x2 * fx * fx - 12.0 * x * y * fx * fy - 9.0 * y2 * fy * fy) * fyy +
           100.0 * fx * fx * fx - 14.0 * x * fx * fy * fy - 8.0 * y * fy * fy * fy;

    if (scales != nullptr) {
        const auto mx = [](std::initializer_list<double> terms) {
            double s = 0.0;
            for (double t : terms) s = std::max(s, std::abs(t));
            return s;
        };
        scales->s1 = mx({R * x * fx, 36.0 * y * fx, 1.5 * R * y * fy, x2 * fy});
        scales->s2 = mx({24.0 * x * fxx, 72.0 * y * fxy, x2 * fyy, 48.0 * fx});
        scales->s3 = mx({6.0 * x3 * fxx * fyy, 324.0 * y2 * fxx * fyy, 6.0 * x3 * fxy * fxy,
                         324.0 * y2 * fxy * fxy, 168.0 * x * fx * fxx, 288.0 * y * fy * fxx,
                         504.0 * y * fx * fxy, 16.0 * x2 * fy * fxy, 7.0 * x2 * fx * fyy,
                         12.0 * x * y * fy * fyy, 180.0 * fx * fx, 12.0 * x * fy * fy});
        scales->s4 = mx({6.0 * x3 * hess * fx, 324.0 * y2 * hess * fx, 120.0 * x * fx * fx * fxx,
                         288.0 * y * fx * fy * fxx, 4.0 * x2 * fy * fy * fxx,
                         360.0 * y * fx * fx * fxy, 16.0 * x2 * fx * fy * fxy,
                         12.0 * x * y * fy * fy * fxy, 5.0 * x2 * fx * fx * fyy,
                         12.0 * x * y * fx * fy * fyy, 9.0 * y2 * fy * fy * fyy,
                         100.0 * fx * fx * fx, 14.0 * x * fx * fy * fy, 8.0 * y * fy * fy * fy});
    }
    return v;
}

struct SylvesterReduction {
    SylvesterMinors minors;
    double diag_sum = 0.0;   // A + B + C
    double minor_sum = 0.0;  // I31 + I32 + I33
    bool pass = false;
    std::string reason;  // empty on pass
};

/// The sufficient positivity conditions: A+B+C > 0, sum of pairwise minors
/// > 0, det >= 0. Together they force the coefficient matrix PSD.
inline SylvesterReduction sylvester_reduce(const QFormCoeffs& c) {
    SylvesterReduction r;
    r.minors.I31 = c.A * c.B - c.D * c.D;
    r.minors.I32 = c.A * c.C - c.E * c.E;
    r.minors.I33 = c.B * c.C - c.F * c.F;
    r.minors.I4 = c.A * c.B * c.C - c.A * c.F * c.F - c.B * c.E * c.E - c.C * c.D * c.D +
                  2.0 * c.D * c.E * c.F;
    r.diag_sum = c.A + c.B + c.C;
    r.minor_sum = r.minors.I31 + r.minors.I32 + r.minors.I33;
    if (!(r.diag_sum > 0.0)) {
        r.reason = "diagonal sum not positive";
    } else if (!(r.minor_sum > 0.0)) {
        r.reason = "minor sum not positive";
    } else if (r.minors.I4 < 0.0) {
        r.reason = "determinant negative";
    } else {
        r.pass = true;
    }
    return r;
}

inline double gram_min_eigenvalue(const VectorTriple& vt) {
    return detail::sym3_min_eigenvalue(vt.xx, vt.yy, vt.zz, vt.xy, vt.xz, vt.yz);
}

/// A|X|^2 + B|Y|^2 + C|Z|^2 + 2D<X,Y> + 2E<X,Z> + 2F<Y,Z>.
inline double quadratic_form_value(const QFormCoeffs& c, const VectorTriple& vt) {
    const double trace = vt.xx + vt.yy + vt.zz;
    const double floor = -1e-10 * std::max(trace, 0.0);
    if (gram_min_eigenvalue(vt) < floor) {
        throw GramError("vector triple Gram matrix is not PSD within tolerance");
    }
    return c.A * vt.xx + c.B * vt.yy + c.C * vt.zz +
           2.0 * (c.D * vt.xy + c.E * vt.xz + c.F * vt.yz);
}

struct EquivalenceConstants {
    double c2 = 0, c3 = 0, c4 = 0;
    double max_rel_dev = 0;
};

/// Fits the global constants linking the closed forms to the coefficient
/// combinations: I2 = c2 (A+B+C), I3 = c3 (sum of minors), I4 = c4 det.
/// The relative deviation is checked across every sample; a single constant
/// must explain them all.
inline EquivalenceConstants equivalence_constants(int samples, std::uint64_t seed,
                                                  const PdiContext& ctx) {
    if (samples < 100) throw std::invalid_argument("equivalence_constants requires samples >= 100");
    struct Row {
        double i1, i2, i3, i4, ii, s2, s3, s4;
    };
    std::vector<Row> rows;
    rows.reserve(static_cast<std::size_t>(samples));
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        const double x = rng.uniform(0.5, 6.0);
        const double z = rng.uniform(-kZMax, kZMax);
        const double y = z * std::pow(x, 1.5);
        const Spectrum s = from_invariants(x, y);
        Jet2 j;
        j.dx = rng.uniform(-1.0, 1.0);
        j.dy = rng.uniform(-1.0, 1.0);
        j.dxx = rng.uniform(-1.0, 1.0);
        j.dxy = rng.uniform(-1.0, 1.0);
        j.dyy = rng.uniform(-1.0, 1.0);
        const auto cf = coefficient_form(s, j, ctx);
        const auto& c = cf.coeffs;
        const auto v = closed_form(x, y, j, ctx);
        const auto red = sylvester_reduce(c);
        rows.push_back({v.I1, v.I2, v.I3, v.I4, cf.II, red.diag_sum, red.minor_sum, red.minors.I4});
    }
    auto fit = [&](auto lhs, auto rhs) {
        double num = 0.0, den = 0.0;
        for (const Row& r : rows) {
            num += lhs(r) * rhs(r);
            den += rhs(r) * rhs(r);
        }
        return num / den;
    };
    EquivalenceConstants ec;
    ec.c2 = fit([](const Row& r) { return r.i2; }, [](const Row& r) { return r.s2; });
    ec.c3 = fit([](const Row& r) { return r.i3; }, [](const Row& r) { return r.s3; });
    ec.c4 = fit([](const Row& r) { return r.i4; }, [](const Row& r) { return r.s4; });
    auto dev = [](double a, double b) {
        return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
    };
    for (const Row& r : rows) {
        ec.max_rel_dev = std::max(ec.max_rel_dev, dev(r.i2, ec.c2 * r.s2));
        ec.max_rel_dev = std::max(ec.max_rel_dev, dev(r.i3, ec.c3 * r.s3));
        ec.max_rel_dev = std::max(ec.max_rel_dev, dev(r.i4, ec.c4 * r.s4));
        ec.max_rel_dev = std::max(ec.max_rel_dev, dev(r.i1, r.ii));
    }
    if (ec.max_rel_dev > 1e-8) {
        throw ConsistencyError("no global constants fit the closed forms, max deviation " +
                               std::to_string(ec.max_rel_dev));
    }
    return ec;
}

}  // namespace wpdi

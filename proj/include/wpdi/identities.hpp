#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "wpdi/errors.hpp"
#include "wpdi/jet.hpp"
#include "wpdi/pdi.hpp"
#include "wpdi/spectrum.hpp"

namespace wpdi {

/// Gram data of the three local vectors attached to the eigenbasis frame.
/// Every identity checked here depends on them only through norms and inner
/// products, so this is the whole input.
struct AbstractVectorData {
    double u2 = 0, v2 = 0, w2 = 0;  // squared norms
    double uv = 0, uw = 0, vw = 0;  // inner products

    bool all_zero() const {
        return u2 == 0 && v2 == 0 && w2 == 0 && uv == 0 && uw == 0 && vw == 0;
    }
};

struct LaplacianInputs {
    Spectrum s;
    AbstractVectorData avd;
    double R = 0.0;
};

/// Validated constructor. Nonzero vector data requires pairwise eigenvalue
/// gaps >= 1e-6; the degenerate locus is covered by the limit-free
/// zero-vector cases instead.
inline LaplacianInputs make_laplacian_inputs(const Spectrum& s, const AbstractVectorData& avd,
                                             double R) {
    const double tr = avd.u2 + avd.v2 + avd.w2;
    if (detail::sym3_min_eigenvalue(avd.u2, avd.v2, avd.w2, avd.uv, avd.uw, avd.vw) <
        -1e-10 * std::max(tr, 1.0)) {
        throw GramError("abstract vector Gram matrix is not PSD");
    }
    if (!avd.all_zero()) {
        if (s.l2 - s.l1 < 1e-6 || s.l3 - s.l2 < 1e-6) {
            throw std::invalid_argument(
                "nonzero vector data requires pairwise eigenvalue gaps >= 1e-6");
        }
    }
    return {s, avd, R};
}

/// Gram of X, Y, Z: the abstract vectors scaled by their eigenvalue gaps.
inline VectorTriple xyz_gram(const Spectrum& s, const AbstractVectorData& avd) {
    const double d12 = s.l1 - s.l2, d23 = s.l2 - s.l3, d31 = s.l3 - s.l1;
    VectorTriple vt;
    vt.xx = d12 * d12 * avd.u2;
    vt.yy = d23 * d23 * avd.v2;
    vt.zz = d31 * d31 * avd.w2;
    vt.xy = d12 * d23 * avd.uv;
    vt.xz = d12 * d31 * avd.uw;
    vt.yz = d23 * d31 * avd.vw;
    return vt;
}

namespace detail {

using Coef3 = std::array<double, 3>;  // coefficients over the (u, v, w) basis

inline double gram_dot(const Coef3& a, const Coef3& b, const AbstractVectorData& g) {
    return a[0] * b[0] * g.u2 + a[1] * b[1] * g.v2 + a[2] * b[2] * g.w2 +
           (a[0] * b[1] + a[1] * b[0]) * g.uv + (a[0] * b[2] + a[2] * b[0]) * g.uw +
           (a[1] * b[2] + a[2] * b[1]) * g.vw;
}

inline double gram_norm(const Coef3& a, const AbstractVectorData& g) {
    return std::sqrt(std::max(0.0, gram_dot(a, a, g)));
}

/// Gradient coefficient vectors of the three eigenvalue fields.
inline std::array<Coef3, 3> grad_lambda(const Spectrum& s) {
    return {Coef3{s.l2 - s.l1, 0.0, s.l3 - s.l1},
            Coef3{s.l1 - s.l2, s.l3 - s.l2, 0.0},
            Coef3{0.0, s.l2 - s.l3, s.l1 - s.l3}};
}

/// Laplacians of the eigenvalue fields (vector part + curvature part).
inline Coef3 laplace_lambda(const LaplacianInputs& in) {
    const double l1 = in.s.l1, l2 = in.s.l2, l3 = in.s.l3;
    const double R = in.R;
    const auto& g = in.avd;
    return {2.0 * (l1 - l2) * g.u2 + 2.0 * (l1 - l3) * g.w2 + 0.5 * R * l1 - 2.0 * l1 * l1 -
                4.0 * l2 * l3,
            2.0 * (l2 - l1) * g.u2 + 2.0 * (l2 - l3) * g.v2 + 0.5 * R * l2 - 2.0 * l2 * l2 -
                4.0 * l1 * l3,
            2.0 * (l3 - l1) * g.w2 + 2.0 * (l3 - l2) * g.v2 + 0.5 * R * l3 - 2.0 * l3 * l3 -
                4.0 * l1 * l2};
}

inline double normalized_diff(double lhs, double rhs, double scale) {
    const double d = std::abs(lhs - rhs);
    if (d == 0.0) return 0.0;
    return d / std::max(scale, 1e-300);
}

}  // namespace detail

/// Assembles grad x = 2 sum l_i grad l_i and grad y = sum l_j l_k grad l_i
/// from the per-eigenvalue gradient formulas and compares against the closed
/// forms in X, Y, Z. Returns the larger Gram-norm residual, normalized by
/// the larger side.
inline double check_gradients(const LaplacianInputs& in) {
    const double l1 = in.s.l1, l2 = in.s.l2, l3 = in.s.l3;
    const double d12 = l1 - l2, d23 = l2 - l3, d31 = l3 - l1;
    const auto grads = detail::grad_lambda(in.s);

    detail::Coef3 step1_x{}, step1_y{};
    const std::array<double, 3> lam{l1, l2, l3};
    const std::array<double, 3> cof{l2 * l3, l1 * l3, l1 * l2};
    for (int i = 0; i < 3; ++i) {
        for (int a = 0; a < 3; ++a) {
            step1_x[a] += 2.0 * lam[i] * grads[i][a];
            step1_y[a] += cof[i] * grads[i][a];
        }
    }
    const detail::Coef3 closed_x{-2.0 * d12 * d12, -2.0 * d23 * d23, -2.0 * d31 * d31};
    const detail::Coef3 closed_y{l3 * d12 * d12, l1 * d23 * d23, l2 * d31 * d31};

    auto residual = [&](const detail::Coef3& a, const detail::Coef3& b) {
        detail::Coef3 d{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
        const double nd = detail::gram_norm(d, in.avd);
        if (nd == 0.0) return 0.0;
        const double scale =
            std::max(detail::gram_norm(a, in.avd), detail::gram_norm(b, in.avd));
        return nd / std::max(scale, 1e-300);
    };
    return std::max(residual(step1_x, closed_x), residual(step1_y, closed_y));
}

/// res_x: sum_i (2 l_i lap l_i + 2 |grad l_i|^2) against the closed form of
/// lap x; res_y: the product rule for lap(l1 l2 l3) against the closed form
/// of lap y. Both normalized by the largest constituent term.
inline std::pair<double, double> check_laplacians(const LaplacianInputs& in) {
    const double l1 = in.s.l1, l2 = in.s.l2, l3 = in.s.l3;
    const auto grads = detail::grad_lambda(in.s);
    const auto laps = detail::laplace_lambda(in);
    const InvariantPoint p = invariants(in.s);
    const VectorTriple vt = xyz_gram(in.s, in.avd);
    const std::array<double, 3> lam{l1, l2, l3};
    const std::array<double, 3> cof{l2 * l3, l1 * l3, l1 * l2};

    double scale_x = 0.0, lhs_x = 0.0;
    auto add_x = [&](double t) {
        lhs_x += t;
        scale_x = std::max(scale_x, std::abs(t));
    };
    for (int i = 0; i < 3; ++i) {
        add_x(2.0 * lam[i] * laps[i]);
        add_x(2.0 * detail::gram_dot(grads[i], grads[i], in.avd));
    }
    double rhs_x = 0.0;
    for (double t : {8.0 * vt.xx, 8.0 * vt.yy, 8.0 * vt.zz, -4.0 * vt.xy, -4.0 * vt.xz,
                     -4.0 * vt.yz, in.R * p.x, -36.0 * p.y}) {
        rhs_x += t;
        scale_x = std::max(scale_x, std::abs(t));
    }

    double scale_y = 0.0, lhs_y = 0.0;
    auto add_y = [&](double t) {
        lhs_y += t;
        scale_y = std::max(scale_y, std::abs(t));
    };
    for (int i = 0; i < 3; ++i) add_y(cof[i] * laps[i]);
    add_y(2.0 * l3 * detail::gram_dot(grads[0], grads[1], in.avd));
    add_y(2.0 * l2 * detail::gram_dot(grads[0], grads[2], in.avd));
    add_y(2.0 * l1 * detail::gram_dot(grads[1], grads[2], in.avd));
    double rhs_y = 0.0;
    for (double t : {-4.0 * l3 * vt.xx, -4.0 * l1 * vt.yy, -4.0 * l2 * vt.zz, -4.0 * l2 * vt.xy,
                     -4.0 * l1 * vt.xz, -4.0 * l3 * vt.yz, 1.5 * in.R * p.y, -p.x * p.x}) {
        rhs_y += t;
        scale_y = std::max(scale_y, std::abs(t));
    }

    return {detail::normalized_diff(lhs_x, rhs_x, scale_x),
            detail::normalized_diff(lhs_y, rhs_y, scale_y)};
}

/// Sum of the assembled eigenvalue gradients; vanishes identically because
/// the trace is constant.
inline double gradient_sum_norm(const LaplacianInputs& in) {
    const auto grads = detail::grad_lambda(in.s);
    detail::Coef3 sum{};
    for (int i = 0; i < 3; ++i) {
        for (int a = 0; a < 3; ++a) sum[a] += grads[i][a];
    }
    return detail::gram_norm(sum, in.avd);
}

/// Jet of h(z) given polynomial coefficients (ascending order).
inline Jet1 polynomial_profile(std::span<const double> coeffs, double z) {
    double h = 0.0, hp = 0.0, hpp = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        hpp = hpp * z + 2.0 * hp;
        hp = hp * z + h;
        h = h * z + coeffs[i];
    }
    return {h, hp, hpp, false};
}

/// Max normalized |I4| of f = x^{1/6} h(z) over seeded interior points, for
/// polynomial h. The fourth inequality is an identity for this family.
inline double check_i4_vanishing(std::span<const double> h_coeffs, int points,
                                 std::uint64_t seed) {
    if (points < 1) throw std::invalid_argument("check_i4_vanishing requires points >= 1");
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = rng.uniform(0.3, 3.0);
        const double z = rng.uniform(-0.95 * kZMax, 0.95 * kZMax);
        const double y = z * std::pow(x, 1.5);
        const Jet2 xj = seed_x(x);
        const Jet2 zj = seed_y(y) * pow_const(xj, -1.5);
        const Jet1 hj = polynomial_profile(h_coeffs, zj.v);
        const Jet2 f = pow_const(xj, 1.0 / 6.0) * compose_univariate(hj, zj);
        PdiScales scales;
        const PdiValues v = closed_form(x, y, f, PdiContext{1.0}, &scales);
        if (v.I4 == 0.0) continue;
        worst = std::max(worst, std::abs(v.I4) / std::max(scales.s4, 1e-300));
    }
    return worst;
}

/// The non-vector terms of the lap x formula must reduce to Rx - 36y; this
/// is the curvature part of the classical Weitzenboeck formula for x.
inline double weitzenbock_consistency(const LaplacianInputs& in) {
    const double l1 = in.s.l1, l2 = in.s.l2, l3 = in.s.l3;
    const InvariantPoint p = invariants(in.s);
    const std::array<double, 3> lam{l1, l2, l3};
    const std::array<double, 3> cof{l2 * l3, l1 * l3, l1 * l2};
    double lhs = 0.0, scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double t = 2.0 * lam[i] * (0.5 * in.R * lam[i] - 2.0 * lam[i] * lam[i] - 4.0 * cof[i]);
        lhs += t;
        scale = std::max(scale, std::abs(t));
    }
    const double rhs = in.R * p.x - 36.0 * p.y;
    scale = std::max({scale, std::abs(in.R * p.x), std::abs(36.0 * p.y)});
    return detail::normalized_diff(lhs, rhs, scale);
}

/// Seeded inputs for the randomized identity checks: spectra with safe
/// eigenvalue gaps and PSD Gram data built as V^T V.
inline std::vector<LaplacianInputs> sample_laplacian_inputs(int count, std::uint64_t seed,
                                                            double R) {
    if (count < 1) throw std::invalid_argument("sample_laplacian_inputs requires count >= 1");
    Rng rng(seed);
    std::vector<LaplacianInputs> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        const double x = rng.uniform(0.5, 6.0);
        const double z = rng.uniform(-kZMax, kZMax);
        const Spectrum s = from_invariants(x, z * std::pow(x, 1.5));
        if (s.l2 - s.l1 < 1e-6 || s.l3 - s.l2 < 1e-6) continue;
        double v[3][3];
        for (auto& row : v) {
            for (double& e : row) e = rng.uniform(-1.0, 1.0);
        }
        AbstractVectorData g;
        auto col_dot = [&](int a, int b) {
            return v[0][a] * v[0][b] + v[1][a] * v[1][b] + v[2][a] * v[2][b];
        };
        g.u2 = col_dot(0, 0);
        g.v2 = col_dot(1, 1);
        g.w2 = col_dot(2, 2);
        g.uv = col_dot(0, 1);
        g.uw = col_dot(0, 2);
        g.vw = col_dot(1, 2);
        out.push_back(make_laplacian_inputs(s, g, R));
    }
    return out;
}

}  // namespace wpdi

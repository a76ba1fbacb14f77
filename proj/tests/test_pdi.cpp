#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wpdi/funcdsl.hpp"
#include "wpdi/identities.hpp"
#include "wpdi/pdi.hpp"
#include "wpdi/spectrum.hpp"

using namespace wpdi;

namespace {

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

Jet2 random_jet(Rng& rng) {
    Jet2 j;
    j.dx = rng.uniform(-1, 1);
    j.dy = rng.uniform(-1, 1);
    j.dxx = rng.uniform(-1, 1);
    j.dxy = rng.uniform(-1, 1);
    j.dyy = rng.uniform(-1, 1);
    return j;
}

}  // namespace

TEST_CASE("coefficient form on pure first-order jets") {
    Jet2 fx;
    fx.dx = 1.0;
    const auto cf = coefficient_form(from_eigenvalues(-1, 0, 1), fx, PdiContext{1.0});
    CHECK(cf.coeffs.A == 8.0);
    CHECK(cf.coeffs.B == 8.0);
    CHECK(cf.coeffs.C == 8.0);
    CHECK(cf.coeffs.D == -2.0);
    CHECK(cf.coeffs.E == -2.0);
    CHECK(cf.coeffs.F == -2.0);
    CHECK(cf.II == 2.0);

    const auto zero = coefficient_form(from_eigenvalues(-1, 0, 1), Jet2{}, PdiContext{1.0});
    CHECK(zero.coeffs.A == 0.0);
    CHECK(zero.coeffs.F == 0.0);
    CHECK(zero.II == 0.0);

    Jet2 fy;
    fy.dy = 1.0;
    const auto cf2 = coefficient_form(from_eigenvalues(-1, -1, 2), fy, PdiContext{0.0});
    CHECK(cf2.coeffs.A == -8.0);
    CHECK(cf2.coeffs.B == 4.0);
    CHECK(cf2.coeffs.C == 4.0);
    CHECK(cf2.coeffs.D == 2.0);
    CHECK(cf2.coeffs.E == 2.0);
    CHECK(cf2.coeffs.F == -4.0);
    CHECK(cf2.II == -36.0);
}

TEST_CASE("closed forms at the worked points") {
    Jet2 fx;
    fx.dx = 1.0;
    const auto v = closed_form(2.0, 0.0, fx, PdiContext{1.0});
    CHECK(v.I1 == 2.0);
    CHECK(v.I2 == 48.0);
    CHECK(v.I3 == 180.0);
    CHECK(v.I4 == 100.0);

    const auto z = closed_form(2.0, 0.0, Jet2{}, PdiContext{1.0});
    CHECK(z.I1 == 0.0);
    CHECK(z.I4 == 0.0);

    const Jet2 fk = eval_jet(parse("x^(1/6)*(1-54*z^2)^2", ExprMode::FunctionXY), 1.0, 0.0);
    const auto w = closed_form(1.0, 0.0, fk, PdiContext{1.0});
    CHECK(close_rel(w.I1, 1.0 / 6.0, 1e-12));

    CHECK_THROWS_AS(closed_form(1.0, 10.0, fx, PdiContext{1.0}), RegionError);
}

TEST_CASE("sylvester reduction verdicts") {
    const auto pass = sylvester_reduce({2, 2, 2, 1, 1, 1});
    CHECK(pass.minors.I31 == 3.0);
    CHECK(pass.minors.I32 == 3.0);
    CHECK(pass.minors.I33 == 3.0);
    CHECK(pass.minors.I4 == 4.0);
    CHECK(pass.pass);

    const auto border = sylvester_reduce({1, 1, 1, 1, 1, 1});
    CHECK(border.minors.I4 == 0.0);
    CHECK_FALSE(border.pass);
    CHECK(border.reason == "minor sum not positive");

    const auto mixed = sylvester_reduce({-1, 1, 1, 0, 0, 0});
    CHECK(mixed.diag_sum == 1.0);
    CHECK(mixed.minor_sum == -1.0);
    CHECK_FALSE(mixed.pass);
}

TEST_CASE("quadratic form value") {
    const QFormCoeffs ident{1, 1, 1, 0, 0, 0};
    VectorTriple ortho;
    ortho.xx = ortho.yy = ortho.zz = 1.0;
    CHECK(quadratic_form_value(ident, ortho) == 3.0);
    CHECK(quadratic_form_value(ident, VectorTriple{}) == 0.0);

    VectorTriple bad;
    bad.xx = bad.yy = 1.0;
    bad.xy = 2.0;  // |<X,Y>| > |X||Y|
    CHECK_THROWS_AS(quadratic_form_value(ident, bad), GramError);
}

TEST_CASE("reduction verdict is sound for realizable triples") {
    Rng rng(31);
    int accepted = 0;
    while (accepted < 50) {
        QFormCoeffs c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                      rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (!sylvester_reduce(c).pass) continue;
        ++accepted;
        for (int g = 0; g < 100; ++g) {
            double v[3][3];
            for (auto& row : v) {
                for (double& e : row) e = rng.uniform(-1, 1);
            }
            VectorTriple vt;
            auto dot = [&](int a, int b) {
                return v[0][a] * v[0][b] + v[1][a] * v[1][b] + v[2][a] * v[2][b];
            };
            vt.xx = dot(0, 0);
            vt.yy = dot(1, 1);
            vt.zz = dot(2, 2);
            vt.xy = dot(0, 1);
            vt.xz = dot(0, 2);
            vt.yz = dot(1, 2);
            CHECK(quadratic_form_value(c, vt) >= -1e-10);
        }
    }
}

TEST_CASE("equivalence constants are global") {
    const auto ec = equivalence_constants(10000, 1, PdiContext{1.0});
    CHECK(close_rel(ec.c2, 2.0, 1e-10));
    CHECK(close_rel(ec.c3, 1.0, 1e-10));
    CHECK(close_rel(ec.c4, 0.25, 1e-10));
    CHECK(ec.max_rel_dev <= 1e-10);

    CHECK_THROWS_AS(equivalence_constants(10, 1, PdiContext{1.0}), std::invalid_argument);
}

TEST_CASE("equivalence relations hold on degenerate spectra") {
    Rng rng(17);
    const Spectrum s = from_eigenvalues(-1, -1, 2);
    const auto p = invariants(s);
    for (int i = 0; i < 200; ++i) {
        const Jet2 j = random_jet(rng);
        const auto cf = coefficient_form(s, j, PdiContext{1.0});
        const auto red = sylvester_reduce(cf.coeffs);
        const auto v = closed_form(p.x, p.y, j, PdiContext{1.0});
        CHECK(close_rel(v.I2, 2.0 * red.diag_sum, 1e-11));
        CHECK(close_rel(v.I3, red.minor_sum, 1e-11));
        CHECK(close_rel(v.I4, 0.25 * red.minors.I4, 1e-11));
        CHECK(close_rel(v.I1, cf.II, 1e-12));
    }
}

TEST_CASE("scale covariance is exact for power-of-two factors") {
    Rng rng(23);
    const auto spectra = sample(Region::omega(), 50, 41);
    for (const Spectrum& s : spectra) {
        const auto p = invariants(s);
        const Jet2 j = random_jet(rng);
        Jet2 jt = j;
        jt.dx *= 2.0;
        jt.dy *= 2.0;
        jt.dxx *= 2.0;
        jt.dxy *= 2.0;
        jt.dyy *= 2.0;
        const PdiContext ctx{1.0};

        const auto c1 = coefficient_form(s, j, ctx);
        const auto c2 = coefficient_form(s, jt, ctx);
        CHECK(c2.coeffs.A == 2.0 * c1.coeffs.A);
        CHECK(c2.coeffs.F == 2.0 * c1.coeffs.F);
        CHECK(c2.II == 2.0 * c1.II);

        const auto v1 = closed_form(p.x, p.y, j, ctx);
        const auto v2 = closed_form(p.x, p.y, jt, ctx);
        CHECK(v2.I1 == 2.0 * v1.I1);
        CHECK(v2.I2 == 2.0 * v1.I2);
        CHECK(v2.I3 == 4.0 * v1.I3);
        CHECK(v2.I4 == 8.0 * v1.I4);
    }
}

TEST_CASE("expansion agrees with the assembled gradient route") {
    // Two routes to the same Laplacian: the coefficient form contracted with
    // a vector-triple Gram, versus f_x lap x + f_y lap y + second-order
    // terms built from the closed gradient forms. Agreement pins every
    // coefficient of the expansion.
    Rng rng(53);
    for (int trial = 0; trial < 500; ++trial) {
        const double x = rng.uniform(0.5, 6.0);
        const double z = rng.uniform(-kZMax, kZMax);
        const double y = z * std::pow(x, 1.5);
        const Spectrum s = from_invariants(x, y);
        const Jet2 j = random_jet(rng);
        const double R = rng.uniform(-2.0, 10.0);

        AbstractVectorData g;
        double v[3][3];
        for (auto& row : v) {
            for (double& e : row) e = rng.uniform(-1, 1);
        }
        auto dot = [&](int a, int b) {
            return v[0][a] * v[0][b] + v[1][a] * v[1][b] + v[2][a] * v[2][b];
        };
        g.u2 = dot(0, 0);
        g.v2 = dot(1, 1);
        g.w2 = dot(2, 2);
        g.uv = dot(0, 1);
        g.uw = dot(0, 2);
        g.vw = dot(1, 2);
        const VectorTriple vt = xyz_gram(s, g);

        const auto cf = coefficient_form(s, j, PdiContext{R});
        const double route1 = quadratic_form_value(cf.coeffs, vt) + cf.II;

        const double d12 = s.l1 - s.l2, d23 = s.l2 - s.l3, d31 = s.l3 - s.l1;
        // grad x = -2(d12 X + d23 Y + d31 Z), grad y = l3 d12 X + l1 d23 Y + l2 d31 Z
        const double ax[3] = {-2 * d12, -2 * d23, -2 * d31};
        const double ay[3] = {s.l3 * d12, s.l1 * d23, s.l2 * d31};
        auto pair_dot = [&](const double* a, const double* b) {
            return a[0] * b[0] * vt.xx + a[1] * b[1] * vt.yy + a[2] * b[2] * vt.zz +
                   (a[0] * b[1] + a[1] * b[0]) * vt.xy + (a[0] * b[2] + a[2] * b[0]) * vt.xz +
                   (a[1] * b[2] + a[2] * b[1]) * vt.yz;
        };
        const double lap_x = 8 * (vt.xx + vt.yy + vt.zz) - 4 * (vt.xy + vt.xz + vt.yz) +
                             (R * x - 36 * y);
        const double lap_y = -4 * (s.l3 * vt.xx + s.l1 * vt.yy + s.l2 * vt.zz) -
                             4 * (s.l2 * vt.xy + s.l1 * vt.xz + s.l3 * vt.yz) +
                             (1.5 * R * y - x * x);
        const double route2 = j.dx * lap_x + j.dy * lap_y + j.dxx * pair_dot(ax, ax) +
                              j.dyy * pair_dot(ay, ay) + 2.0 * j.dxy * pair_dot(ax, ay);

        CHECK(close_rel(route1, route2, 1e-11));
    }
}

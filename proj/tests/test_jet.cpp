#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "wpdi/jet.hpp"
#include "wpdi/rng.hpp"

using namespace wpdi;

namespace {

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Central finite differences of a scalar function, for the order-2 oracle.
struct FiniteDiff {
    std::function<double(double, double)> f;
    double h = 1e-5;

    double dx(double x, double y) const { return (f(x + h, y) - f(x - h, y)) / (2 * h); }
    double dy(double x, double y) const { return (f(x, y + h) - f(x, y - h)) / (2 * h); }
    double dxx(double x, double y) const {
        return (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h);
    }
    double dyy(double x, double y) const {
        return (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / (h * h);
    }
    double dxy(double x, double y) const {
        return (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) /
               (4 * h * h);
    }
};

void check_against_fd(const Jet2& j, const FiniteDiff& fd, double x, double y, double tol = 1e-6) {
    // Beyond the relative tolerance, second-difference quotients carry a
    // roundoff floor of order eps |f| / h^2 that the oracle cannot resolve.
    const double fscale = std::max({1.0, std::abs(fd.f(x, y)), std::abs(fd.f(x + fd.h, y)),
                                    std::abs(fd.f(x, y + fd.h))});
    const double eps = 2.3e-16;
    const double noise1 = 4.0 * eps * fscale / fd.h;
    const double noise2 = 16.0 * eps * fscale / (fd.h * fd.h);
    auto close1 = [&](double a, double b) {
        return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)}) + noise1;
    };
    auto close2 = [&](double a, double b) {
        return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)}) + noise2;
    };
    CHECK(close_rel(j.v, fd.f(x, y), 1e-12));
    CHECK(close1(j.dx, fd.dx(x, y)));
    CHECK(close1(j.dy, fd.dy(x, y)));
    CHECK(close2(j.dxx, fd.dxx(x, y)));
    CHECK(close2(j.dxy, fd.dxy(x, y)));
    CHECK(close2(j.dyy, fd.dyy(x, y)));
}

}  // namespace

TEST_CASE("coordinate seeds") {
    const auto [xj, yj] = seed(2.0, 3.0);
    CHECK(xj.v == 2.0);
    CHECK(xj.dx == 1.0);
    CHECK(xj.dy == 0.0);
    CHECK(yj.v == 3.0);
    CHECK(yj.dy == 1.0);
    const auto [x0, y0] = seed(0.0, 0.0);
    CHECK(x0.v == 0.0);
    CHECK(y0.v == 0.0);
}

TEST_CASE("product and quotient rules") {
    const Jet2 sq = seed_x(3.0) * seed_x(3.0);
    CHECK(sq.v == 9.0);
    CHECK(sq.dx == 6.0);
    CHECK(sq.dxx == 2.0);

    const Jet2 xy = seed_x(2.0) * seed_y(5.0);
    CHECK(xy.v == 10.0);
    CHECK(xy.dx == 5.0);
    CHECK(xy.dy == 2.0);
    CHECK(xy.dxy == 1.0);

    const Jet2 inv = 1.0 / seed_x(2.0);
    CHECK(inv.v == 0.5);
    CHECK(close_rel(inv.dx, -0.25, 1e-15));
    CHECK(close_rel(inv.dxx, 0.25, 1e-15));

    CHECK_THROWS_AS(seed_y(1.0) / seed_x(0.0), DivisionByZero);
}

TEST_CASE("constant powers") {
    const Jet2 sixth = pow_const(seed_x(64.0), 1.0 / 6.0);
    CHECK(close_rel(sixth.v, 2.0, 1e-14));
    CHECK(close_rel(sixth.dx, 1.0 / 192.0, 1e-12));

    const Jet2 m32 = pow_const(seed_x(4.0), -1.5);
    CHECK(close_rel(m32.v, 0.125, 1e-14));
    CHECK(close_rel(m32.dx, -3.0 / 64.0, 1e-12));

    CHECK(pow_const(seed_x(0.0), 1.0 / 6.0).singular);
    CHECK(pow_const(seed_x(0.0), -1.0).singular);

    const Jet2 zero_sq = pow_const(seed_x(0.0), 2.0);
    CHECK_FALSE(zero_sq.singular);
    CHECK(zero_sq.v == 0.0);
    CHECK(zero_sq.dx == 0.0);
    CHECK(zero_sq.dxx == 2.0);

    // Negative base with an integer exponent stays smooth.
    const Jet2 neg_cube = pow_const(seed_x(-2.0), 3.0);
    CHECK(neg_cube.v == -8.0);
    CHECK(neg_cube.dx == 12.0);
    CHECK(pow_const(seed_x(-2.0), 0.5).singular);
}

TEST_CASE("univariate composition") {
    const Jet2 zj = seed_y(0.3) * pow_const(seed_x(2.0), -1.5);

    // Identity profile reproduces the inner jet.
    const Jet2 ident = compose_univariate(Jet1{zj.v, 1.0, 0.0, false}, zj);
    CHECK(ident.v == zj.v);
    CHECK(ident.dx == zj.dx);
    CHECK(ident.dxx == zj.dxx);

    // Critical point of 1 - 54 z^2 at z = 0.
    const Jet2 z0 = seed_y(0.0) * pow_const(seed_x(1.5), -1.5);
    const Jet2 crit = compose_univariate(Jet1{1.0, 0.0, -108.0, false}, z0);
    CHECK(crit.v == 1.0);
    CHECK(crit.dy == 0.0);

    // z^2 through composition matches plain multiplication.
    const Jet2 via_compose = compose_univariate(Jet1{9.0, 6.0, 2.0, false}, seed_x(3.0));
    const Jet2 via_mul = seed_x(3.0) * seed_x(3.0);
    CHECK(via_compose.v == via_mul.v);
    CHECK(via_compose.dx == via_mul.dx);
    CHECK(via_compose.dxx == via_mul.dxx);
}

TEST_CASE("composition with affine profiles equals jet arithmetic exactly") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
        const double x = rng.uniform(0.5, 3), y = rng.uniform(-1, 1);
        const Jet2 inner = seed_x(x) * seed_y(y) + seed_x(x);
        const Jet2 composed = compose_univariate(Jet1{a * inner.v + b, a, 0.0, false}, inner);
        const Jet2 direct = a * inner + b;
        CHECK(composed.v == direct.v);
        CHECK(composed.dx == direct.dx);
        CHECK(composed.dy == direct.dy);
        CHECK(composed.dxx == direct.dxx);
        CHECK(composed.dxy == direct.dxy);
        CHECK(composed.dyy == direct.dyy);
    }
}

TEST_CASE("jet derivatives agree with finite differences") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.uniform(0.5, 3.0);
        const double y = rng.uniform(-1.0, 1.0);

        check_against_fd(seed_x(x) * seed_y(y) + pow_const(seed_x(x), 3.0),
                         {[](double a, double b) { return a * b + a * a * a; }}, x, y);
        check_against_fd(seed_y(y) / seed_x(x), {[](double a, double b) { return b / a; }}, x, y);
        check_against_fd(pow_const(seed_x(x), 1.0 / 6.0),
                         {[](double a, double) { return std::pow(a, 1.0 / 6.0); }}, x, y);
        check_against_fd(exp_jet(seed_y(y) * constant(0.5)),
                         {[](double, double b) { return std::exp(0.5 * b); }}, x, y);
        check_against_fd(log_jet(seed_x(x)), {[](double a, double) { return std::log(a); }}, x, y);
        check_against_fd(sqrt_jet(seed_x(x)), {[](double a, double) { return std::sqrt(a); }}, x,
                         y);
    }
}

TEST_CASE("algebraic laws at the jet level") {
    Rng rng(13);
    auto random_jet = [&] {
        Jet2 j;
        j.v = rng.uniform(0.5, 2.0);
        j.dx = rng.uniform(-1, 1);
        j.dy = rng.uniform(-1, 1);
        j.dxx = rng.uniform(-1, 1);
        j.dxy = rng.uniform(-1, 1);
        j.dyy = rng.uniform(-1, 1);
        return j;
    };
    auto close_jet = [](const Jet2& a, const Jet2& b, double tol) {
        return close_rel(a.v, b.v, tol) && close_rel(a.dx, b.dx, tol) &&
               close_rel(a.dy, b.dy, tol) && close_rel(a.dxx, b.dxx, tol) &&
               close_rel(a.dxy, b.dxy, tol) && close_rel(a.dyy, b.dyy, tol);
    };
    for (int i = 0; i < 200; ++i) {
        const Jet2 a = random_jet(), b = random_jet(), c = random_jet();
        CHECK(close_jet(a * b, b * a, 1e-13));
        CHECK(close_jet((a * b) * c, a * (b * c), 1e-13));
        CHECK(close_jet((a * b) / b, a, 1e-12));
    }
}

TEST_CASE("singular marker propagates") {
    const Jet2 bad = pow_const(seed_x(0.0), 0.5);
    REQUIRE(bad.singular);
    CHECK((bad + seed_y(1.0)).singular);
    CHECK((bad * constant(0.0)).singular);
    CHECK(pow_const(bad, 2.0).singular);
    CHECK(compose_univariate(Jet1{1, 1, 1, false}, bad).singular);
    CHECK_NOTHROW(bad / seed_x(0.0));  // marker wins over the zero divisor
}

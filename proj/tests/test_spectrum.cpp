#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wpdi/spectrum.hpp"

using namespace wpdi;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("from_eigenvalues sorts and recenters") {
    const Spectrum s = from_eigenvalues(2, -1, -1);
    CHECK(s.l1 == -1.0);
    CHECK(s.l2 == -1.0);
    CHECK(s.l3 == 2.0);

    const Spectrum z = from_eigenvalues(0, 0, 0);
    CHECK(z.l1 == 0.0);
    CHECK(z.l3 == 0.0);

    const Spectrum t = from_eigenvalues(1, 0.5, -1.5);
    CHECK(t.l1 == -1.5);
    CHECK(t.l2 == 0.5);
    CHECK(t.l3 == 1.0);
}

TEST_CASE("from_eigenvalues repairs small trace, rejects large") {
    const Spectrum s = from_eigenvalues(1.0 + 3e-10, -0.5, -0.5);
    CHECK(close(s.l1 + s.l2 + s.l3, 0.0, 1e-15));
    CHECK_THROWS_AS(from_eigenvalues(1, 1, 1), TraceError);
    CHECK_THROWS_AS(from_eigenvalues(1e-3, 0, 0), TraceError);
}

TEST_CASE("invariants of the named spectra") {
    const InvariantPoint k = invariants(from_eigenvalues(-1, -1, 2));
    CHECK(k.x == 6.0);
    CHECK(k.y == 2.0);
    REQUIRE(k.z.has_value());
    CHECK(close(*k.z, 1.0 / (3.0 * std::sqrt(6.0)), 1e-14));

    const InvariantPoint s = invariants(from_eigenvalues(-1, 0, 1));
    CHECK(s.x == 2.0);
    CHECK(s.y == 0.0);
    REQUIRE(s.z.has_value());
    CHECK(*s.z == 0.0);

    const InvariantPoint z = invariants(Spectrum{0, 0, 0});
    CHECK(z.x == 0.0);
    CHECK_FALSE(z.z.has_value());
}

TEST_CASE("repeated-eigenvalue pattern hits the z extreme exactly") {
    for (double lam : {0.5, 1.0, 2.25, 7.0}) {
        const auto p = invariants(from_eigenvalues(-lam, -lam, 2 * lam));
        REQUIRE(p.z.has_value());
        CHECK(close(*p.z, kZMax, 1e-14));
    }
}

TEST_CASE("from_invariants inverts the named points") {
    const Spectrum a = from_invariants(6.0, 2.0);
    CHECK(close(a.l1, -1.0, 1e-12));
    CHECK(close(a.l2, -1.0, 1e-12));
    CHECK(close(a.l3, 2.0, 1e-12));

    const Spectrum b = from_invariants(2.0, 0.0);
    CHECK(close(b.l1, -1.0, 1e-12));
    CHECK(close(b.l2, 0.0, 1e-12));
    CHECK(close(b.l3, 1.0, 1e-12));

    // (t+2)(t+1)(t-3) = t^3 - 7t - 6, so x = 2*7 = 14, y = 6.
    const Spectrum c = from_invariants(14.0, 6.0);
    CHECK(close(c.l1, -2.0, 1e-10));
    CHECK(close(c.l2, -1.0, 1e-10));
    CHECK(close(c.l3, 3.0, 1e-10));

    CHECK_THROWS_AS(from_invariants(1.0, 10.0), RegionError);
    CHECK_THROWS_AS(from_invariants(-1.0, 0.0), RegionError);
}

TEST_CASE("invariants round-trip through from_invariants") {
    const auto spectra = sample(Region::omega(), 1000, 99);
    for (const Spectrum& s : spectra) {
        const auto p = invariants(s);
        const auto q = invariants(from_invariants(p));
        CHECK(close_rel(p.x, q.x, 1e-10));
        CHECK(close_rel(p.y, q.y, 1e-10));
    }
}

TEST_CASE("algebraic bound values and equality flag") {
    const auto eq = algebraic_bound(from_eigenvalues(-1, -1, 2));
    CHECK(close_rel(eq.lhs, std::pow(6.0, 1.5), 1e-14));
    CHECK(close_rel(eq.rhs, std::pow(6.0, 1.5), 1e-14));
    CHECK(eq.equality);

    const auto mid = algebraic_bound(from_eigenvalues(-1, 0, 1));
    CHECK(mid.lhs == 0.0);
    CHECK(close_rel(mid.rhs, std::pow(2.0, 1.5), 1e-14));
    CHECK_FALSE(mid.equality);

    // Direct arithmetic: x = 2.25 + 0.25 + 1 = 3.5, |y| = 0.75.
    const auto gen = algebraic_bound(from_eigenvalues(-1.5, 0.5, 1.0));
    CHECK(close_rel(gen.lhs, 3.0 * std::sqrt(6.0) * 0.75, 1e-14));
    CHECK(close_rel(gen.rhs, std::pow(3.5, 1.5), 1e-14));
    CHECK_FALSE(gen.equality);
}

TEST_CASE("spectrum_count clusters") {
    CHECK(spectrum_count(from_eigenvalues(-1, -1, 2), 1e-9) == 2);
    CHECK(spectrum_count(Spectrum{0, 0, 0}, 1e-9) == 1);
    CHECK(spectrum_count(from_eigenvalues(-1.5, 0.5, 1.0), 1e-9) == 3);
}

TEST_CASE("equality holds exactly when at most two distinct eigenvalues") {
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) {
        const double lam = rng.uniform(0.1, 3.0);
        const Spectrum rep = from_eigenvalues(-lam, -lam, 2 * lam);
        CHECK(algebraic_bound(rep).equality);
        CHECK(spectrum_count(rep, 1e-9) <= 2);

        const double a = rng.uniform(0.1, 2.0);
        const double b = a + rng.uniform(0.5, 2.0);
        const Spectrum dist = from_eigenvalues(a, b, -a - b);
        CHECK_FALSE(algebraic_bound(dist).equality);
        CHECK(spectrum_count(dist, 1e-9) == 3);
    }
}

TEST_CASE("discriminant identity") {
    CHECK(discriminant_identity(from_eigenvalues(-1, 0, 1)) == 0.0);
    CHECK(discriminant_identity(from_eigenvalues(-1, -1, 2)) == 0.0);
    CHECK(close(discriminant_identity(from_eigenvalues(-2, -1, 3)), 0.0, 1e-9));

    const auto spectra = sample(Region::omega(), 10000, 7);
    for (const Spectrum& s : spectra) {
        const auto p = invariants(s);
        CHECK(discriminant_identity(s) <= 1e-9 * std::max(1.0, p.x * p.x * p.x));
    }
}

TEST_CASE("sampling respects the region and the seed") {
    const auto omega = sample(Region::omega(), 500, 7);
    REQUIRE(omega.size() == 500);
    for (const Spectrum& s : omega) {
        const auto p = invariants(s);
        CHECK(Region::omega().contains(p.x, p.y));
    }

    const auto zero = sample(Region::omega_zero(), 500, 1);
    for (const Spectrum& s : zero) {
        const auto p = invariants(s);
        CHECK(p.x > 0.0);
        CHECK(p.y >= -1e-12);
    }

    const auto delta = sample(Region::omega_delta(0.5), 500, 1);
    for (const Spectrum& s : delta) {
        CHECK(invariants(s).y >= 0.5 - 1e-9);
    }

    const auto again = sample(Region::omega(), 500, 7);
    for (std::size_t i = 0; i < again.size(); ++i) {
        CHECK(again[i].l1 == omega[i].l1);
        CHECK(again[i].l3 == omega[i].l3);
    }

    CHECK_THROWS_AS(sample(Region::omega_delta(100.0), 1, 1), RegionError);
    CHECK_THROWS_AS(Region::omega_delta(0.0), std::invalid_argument);
    CHECK_THROWS_AS(sample(Region::omega(), 0, 1), std::invalid_argument);
}

TEST_CASE("sampled spectra satisfy the pointwise bound") {
    const auto spectra = sample(Region::omega(), 10000, 321);
    for (const Spectrum& s : spectra) {
        const auto b = algebraic_bound(s);
        CHECK(b.lhs <= b.rhs + 1e-10);
    }
}

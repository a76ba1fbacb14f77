#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wpdi/errors.hpp"
#include "wpdi/spectrum.hpp"

namespace wpdi {

enum class AbelMode { EqualityTracking, SlackContinuation };

inline const char* to_string(AbelMode m) {
    return m == AbelMode::EqualityTracking ? "EqualityTracking" : "SlackContinuation";
}

/// One grid node of a candidate solution.
struct AbelState {
    double z = 0;
    double psi = 0;
    double slack = 0;  // LHS of the inequality at the node
    AbelMode mode = AbelMode::EqualityTracking;
};

/// Cubic part of the inequality: the slope bound is numerator/denominator.
inline double abel_numerator(double z, double psi) {
    const double c = 1.0 + 54.0 * z * z;
    return 27.0 * z * psi * psi * psi + 9.0 * c * psi * psi - 270.0 * z * psi + 8.0 * c;
}

inline double abel_denominator(double z, double psi) {
    return 3.0 * (1.0 - 54.0 * z * z) * (1.0 - 9.0 * z * psi);
}

/// Inequality LHS for a given slope.
inline double abel_slack(double z, double psi, double dpsi) {
    return abel_denominator(z, psi) * dpsi - abel_numerator(z, psi);
}

struct AbelRhs {
    double slope = 0;
    double numerator = 0;
    double denominator = 0;
};

/// Equality-case slope. The denominator vanishes only at the right endpoint
/// of the z interval.
inline AbelRhs abel_rhs(double z, double psi) {
    if (z < 0.0 || z > kZMax * (1.0 + 1e-12)) {
        throw std::invalid_argument("abel_rhs requires z in [0, 1/(3 sqrt 6)]");
    }
    if (psi > 0.0) throw std::invalid_argument("abel_rhs requires psi <= 0");
    const double num = abel_numerator(z, psi);
    const double den = abel_denominator(z, psi);
    if (den < 1e-14) {
        throw SingularPoint("equality slope singular, numerator " + std::to_string(num), num);
    }
    return {num / den, num, den};
}

struct AbelSolution {
    std::vector<double> z, psi, phi, h, slack;
    std::vector<AbelMode> mode;
    double endpoint_estimate = 0.0;
    bool monotone = false;

    std::size_t size() const { return z.size(); }

    AbelState state_at(std::size_t i) const { return {z[i], psi[i], slack[i], mode[i]}; }
};

namespace detail {

inline double abel_slope_raw(double z, double psi) {
    return abel_numerator(z, psi) / abel_denominator(z, psi);
}

struct HermiteSeg {
    double z0, z1, y0, y1, m0, m1;

    double eval(double z) const {
        const double dz = z1 - z0;
        const double t = (z - z0) / dz;
        const double t2 = t * t, t3 = t2 * t;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * dz * m0 +
               (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * dz * m1;
    }

    double deriv(double z) const {
        const double dz = z1 - z0;
        const double t = (z - z0) / dz;
        const double t2 = t * t;
        return ((6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * dz * m0 +
                (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * dz * m1) /
               dz;
    }
};

/// Lagrange extrapolation to eps = 0 of values f(eps_i).
inline double extrapolate_to_zero(const std::array<double, 3>& eps,
                                  const std::array<double, 3>& f) {
    double result = 0.0;
    for (int i = 0; i < 3; ++i) {
        double li = 1.0;
        for (int j = 0; j < 3; ++j) {
            if (j != i) li *= eps[j] / (eps[j] - eps[i]);
        }
        result += li * f[i];
    }
    return result;
}

/// Exact integral of (c0 + c1 z) / (1 - 54 z^2) over [z1, z2]; the rational
/// factor is integrated in closed form so the log-divergent endpoint does
/// not degrade the quadrature.
inline double log_h_increment(double z1, double z2, double phi1, double phi2) {
    const double a = 3.0 * kSqrt6;  // 1 - 54 z^2 = (1 - a z)(1 + a z)
    const double c1 = (phi2 - phi1) / (z2 - z1);
    const double c0 = phi1 - c1 * z1;
    auto f1 = [&](double z) { return std::log((1.0 + a * z) / (1.0 - a * z)) / (2.0 * a); };
    auto f2 = [&](double z) { return -std::log(1.0 - 54.0 * z * z) / 108.0; };
    return c0 * (f1(z2) - f1(z1)) + c1 * (f2(z2) - f2(z1));
}

}  // namespace detail

/// Constructs a candidate solution of the constrained inequality starting
/// from psi(0) = psi0. While the slope bound is active (numerator > 0) the
/// equality ODE is tracked with an adaptive embedded Runge-Kutta pair; once
/// the inequality turns slack the candidate continues as a monotone cubic
/// aimed at psi = -3 sqrt 6 at the right endpoint. Integration stops at
/// z_end = 1/(3 sqrt 6) - eps_end; the endpoint value is reported by
/// extrapolation. h is reconstructed from h'/h = phi / (1 - 54 z^2), h(0)=1.
inline AbelSolution abel_solve(double psi0, double step_tol = 1e-10, double eps_end = 1e-6) {
    if (psi0 > 0.0) throw ConstraintViolation("psi0 must be <= 0");
    if (!(step_tol > 0.0)) throw std::invalid_argument("step_tol must be positive");
    if (!(eps_end > 0.0) || eps_end >= kZMax) {
        throw std::invalid_argument("eps_end must lie in (0, 1/(3 sqrt 6))");
    }
    const double z_end = kZMax - eps_end;
    const double psi_target = -3.0 * kSqrt6;

    struct Node {
        double z, psi, slope;
        AbelMode mode;
    };
    std::vector<Node> nodes;

    auto push_node = [&](double z, double psi, double slope, AbelMode m) {
        if (psi > 1e-14) throw ConstraintViolation("psi > 0 at z = " + std::to_string(z));
        if (!nodes.empty() && psi < nodes.back().psi - 1e-12) {
            throw MonotonicityFailure("psi decreased at z = " + std::to_string(z));
        }
        const double s = abel_slack(z, psi, slope);
        if (s < -step_tol) {
            throw SlackViolation("inequality violated at z = " + std::to_string(z) +
                                 ", slack " + std::to_string(s));
        }
        nodes.push_back({z, psi, slope, m});
    };

    // Equality phase: Dormand-Prince 5(4).
    double z = 0.0, psi = psi0;
    push_node(z, psi, detail::abel_slope_raw(z, psi), AbelMode::EqualityTracking);
    bool tracking = abel_numerator(z, psi) > 0.0;
    bool switched = false;
    double z_switch = 0.0, psi_switch = 0.0;

    if (tracking) {
        constexpr double hmax = 1e-4;
        double h = 1e-9;
        double k1 = detail::abel_slope_raw(z, psi);
        while (z < z_end) {
            h = std::min({h, hmax, z_end - z});
            const double k2 = detail::abel_slope_raw(z + h / 5.0, psi + h * (k1 / 5.0));
            const double k3 = detail::abel_slope_raw(z + 3.0 * h / 10.0,
                                                     psi + h * (3.0 * k1 / 40.0 + 9.0 * k2 / 40.0));
            const double k4 = detail::abel_slope_raw(
                z + 4.0 * h / 5.0, psi + h * (44.0 * k1 / 45.0 - 56.0 * k2 / 15.0 + 32.0 * k3 / 9.0));
            const double k5 = detail::abel_slope_raw(
                z + 8.0 * h / 9.0,
                psi + h * (19372.0 * k1 / 6561.0 - 25360.0 * k2 / 2187.0 + 64448.0 * k3 / 6561.0 -
                           212.0 * k4 / 729.0));
            const double k6 = detail::abel_slope_raw(
                z + h, psi + h * (9017.0 * k1 / 3168.0 - 355.0 * k2 / 33.0 + 46732.0 * k3 / 5247.0 +
                                  49.0 * k4 / 176.0 - 5103.0 * k5 / 18656.0));
            const double psi5 =
                psi + h * (35.0 * k1 / 384.0 + 500.0 * k3 / 1113.0 + 125.0 * k4 / 192.0 -
                           2187.0 * k5 / 6784.0 + 11.0 * k6 / 84.0);
            const double k7 = detail::abel_slope_raw(z + h, psi5);
            const double psi4 =
                psi + h * (5179.0 * k1 / 57600.0 + 7571.0 * k3 / 16695.0 + 393.0 * k4 / 640.0 -
                           92097.0 * k5 / 339200.0 + 187.0 * k6 / 2100.0 + k7 / 40.0);
            const double err = std::abs(psi5 - psi4);
            const double tol = step_tol * (1.0 + std::max(std::abs(psi), std::abs(psi5)));
            if (err <= tol) {
                const detail::HermiteSeg seg{z, z + h, psi, psi5, k1, k7};
                if (abel_numerator(z + h, psi5) <= 0.0) {
                    // Slope bound went slack inside this step; bisect for the crossing.
                    double lo = 0.0, hi = 1.0;
                    for (int it = 0; it < 200 && (hi - lo) * h > 1e-16; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const double zm = z + mid * h;
                        if (abel_numerator(zm, seg.eval(zm)) > 0.0) {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    z_switch = z + hi * h;
                    psi_switch = seg.eval(z_switch);
                    push_node(z_switch, psi_switch,
                              detail::abel_slope_raw(z_switch, psi_switch),
                              AbelMode::EqualityTracking);
                    switched = true;
                    break;
                }
                z += h;
                psi = psi5;
                k1 = k7;
                push_node(z, psi, k7, AbelMode::EqualityTracking);
            }
            const double shrink = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
            h *= std::clamp(shrink, 0.2, 5.0);
        }
    } else {
        // The inequality is slack at z = 0 already; continue from the start.
        switched = true;
        z_switch = 0.0;
        psi_switch = psi0;
        nodes.back().mode = AbelMode::EqualityTracking;
    }

    detail::HermiteSeg cont{};
    if (switched) {
        if (psi_switch > psi_target + 1e-9) {
            throw MonotonicityFailure("slack continuation cannot reach the endpoint value");
        }
        const double dz = kZMax - z_switch;
        const double secant = (psi_target - psi_switch) / dz;
        cont = {z_switch, kZMax, psi_switch, psi_target, 0.0, secant};

        // Uniform nodes, then a geometric tail for the endpoint asymptotics.
        const double delta_tail = std::min(1e-3, dz / 10.0);
        std::vector<double> zs;
        const int n_uniform = 400;
        const double span = kZMax - delta_tail - z_switch;
        for (int i = 1; i <= n_uniform; ++i) {
            zs.push_back(z_switch + span * static_cast<double>(i) / n_uniform);
        }
        const double ratio = std::pow(10.0, 1.0 / 16.0);
        for (double d = delta_tail / ratio; d > eps_end * (1.0 + 1e-9); d /= ratio) {
            zs.push_back(kZMax - d);
        }
        zs.push_back(z_end);
        for (double zn : zs) {
            if (zn <= nodes.back().z) continue;
            push_node(zn, cont.eval(zn), cont.deriv(zn), AbelMode::SlackContinuation);
        }
    }

    // Endpoint estimate by extrapolation over shrinking offsets.
    AbelSolution sol;
    if (switched) {
        const double e1 = std::min(1e-4, (kZMax - z_switch) / 2.0);
        const std::array<double, 3> eps{e1, e1 / 10.0, e1 / 100.0};
        std::array<double, 3> vals{};
        for (int i = 0; i < 3; ++i) vals[static_cast<std::size_t>(i)] = cont.eval(kZMax - eps[static_cast<std::size_t>(i)]);
        sol.endpoint_estimate = detail::extrapolate_to_zero(eps, vals);
    } else {
        const std::size_t n = nodes.size();
        const std::array<double, 3> eps{kZMax - nodes[n - 3].z, kZMax - nodes[n - 2].z,
                                        kZMax - nodes[n - 1].z};
        const std::array<double, 3> vals{nodes[n - 3].psi, nodes[n - 2].psi, nodes[n - 1].psi};
        sol.endpoint_estimate = detail::extrapolate_to_zero(eps, vals);
    }

    sol.z.reserve(nodes.size());
    for (const Node& n : nodes) {
        sol.z.push_back(n.z);
        sol.psi.push_back(n.psi);
        sol.phi.push_back(n.psi - 6.0 * n.z);
        sol.slack.push_back(abel_slack(n.z, n.psi, n.slope));
        sol.mode.push_back(n.mode);
    }
    sol.h.assign(nodes.size(), 1.0);
    double logh = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        logh += detail::log_h_increment(sol.z[i - 1], sol.z[i], sol.phi[i - 1], sol.phi[i]);
        sol.h[i] = std::exp(logh);
    }
    sol.monotone = true;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (sol.psi[i] < sol.psi[i - 1] - 1e-12) sol.monotone = false;
    }
    return sol;
}

struct AbelVerifyReport {
    bool psi_nonpositive = false;
    bool monotone = false;
    bool slack_ok = false;
    bool pass = false;
    double max_psi = 0.0;
    double min_slack = 0.0;
    double min_slack_z = 0.0;
    int nodes = 0;
};

/// Independent re-check of a candidate: monotone cubic interpolation onto a
/// uniform refinement, slopes from centered differences, then the
/// inequality is re-evaluated node by node. The slack tolerance absorbs the
/// finite-difference truncation error and is relative to the local
/// numerator scale.
inline AbelVerifyReport abel_verify(const AbelSolution& candidate, int grid_n,
                                    double slack_rel_tol = 1e-3) {
    const std::size_t n = candidate.size();
    if (n < 4) throw std::invalid_argument("abel_verify requires at least 4 candidate nodes");
    if (grid_n < 8) throw std::invalid_argument("abel_verify requires grid_n >= 8");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(candidate.z[i] > candidate.z[i - 1])) {
            throw std::invalid_argument("candidate grid must be strictly increasing");
        }
    }

    // Shape-preserving slopes (Fritsch-Carlson).
    std::vector<double> m(n, 0.0);
    std::vector<double> hseg(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        hseg[i] = candidate.z[i + 1] - candidate.z[i];
        delta[i] = (candidate.psi[i + 1] - candidate.psi[i]) / hseg[i];
    }
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            const double w1 = 2.0 * hseg[i] + hseg[i - 1];
            const double w2 = hseg[i] + 2.0 * hseg[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }

    auto interp = [&](double zq) {
        const auto it = std::upper_bound(candidate.z.begin(), candidate.z.end(), zq);
        std::size_t i = static_cast<std::size_t>(std::distance(candidate.z.begin(), it));
        i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
        const detail::HermiteSeg seg{candidate.z[i], candidate.z[i + 1], candidate.psi[i],
                                     candidate.psi[i + 1], m[i], m[i + 1]};
        return seg.eval(zq);
    };

    // Refinement grid: the candidate nodes plus grid_n uniform nodes, so the
    // finite differences keep the candidate's adaptive density where the
    // solution is steep. Uniform nodes landing within a quarter spacing of a
    // candidate node are dropped; nearly coincident stencil points would
    // amplify interpolation noise.
    const double z0 = candidate.z.front();
    const double z1 = candidate.z.back();
    const double dz_u = (z1 - z0) / (grid_n - 1);
    std::vector<double> grid(candidate.z);
    for (int j = 0; j < grid_n; ++j) {
        const double zq = z0 + (z1 - z0) * static_cast<double>(j) / (grid_n - 1);
        const auto it = std::lower_bound(candidate.z.begin(), candidate.z.end(), zq);
        double nearest = std::numeric_limits<double>::infinity();
        if (it != candidate.z.end()) nearest = std::min(nearest, std::abs(*it - zq));
        if (it != candidate.z.begin()) nearest = std::min(nearest, std::abs(*(it - 1) - zq));
        if (nearest > 0.25 * dz_u) grid.push_back(zq);
    }
    std::sort(grid.begin(), grid.end());
    const std::size_t gn = grid.size();
    std::vector<double> pp(gn);
    for (std::size_t j = 0; j < gn; ++j) pp[j] = interp(grid[j]);

    AbelVerifyReport rep;
    rep.nodes = static_cast<int>(gn);
    rep.psi_nonpositive = true;
    rep.monotone = true;
    rep.slack_ok = true;
    rep.min_slack = std::numeric_limits<double>::infinity();
    rep.max_psi = -std::numeric_limits<double>::infinity();
    // Second-order three-point derivative on the nonuniform grid.
    auto three_point = [&](std::size_t i0, std::size_t i1, std::size_t i2, double at) {
        const double x0 = grid[i0], x1 = grid[i1], x2 = grid[i2];
        const double y0 = pp[i0], y1 = pp[i1], y2 = pp[i2];
        return y0 * (2.0 * at - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
               y1 * (2.0 * at - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
               y2 * (2.0 * at - x0 - x1) / ((x2 - x0) * (x2 - x1));
    };
    // Second divided difference, for the truncation allowance below.
    auto curvature = [&](std::size_t i0, std::size_t i1, std::size_t i2) {
        const double x0 = grid[i0], x1 = grid[i1], x2 = grid[i2];
        const double d01 = (pp[i1] - pp[i0]) / (x1 - x0);
        const double d12 = (pp[i2] - pp[i1]) / (x2 - x1);
        return 2.0 * (d12 - d01) / (x2 - x0);
    };
    for (std::size_t j = 0; j < gn; ++j) {
        const double zq = grid[j];
        const double pq = pp[j];
        rep.max_psi = std::max(rep.max_psi, pq);
        if (pq > 1e-12) rep.psi_nonpositive = false;
        if (j > 0 && pq < pp[j - 1] - 1e-12) rep.monotone = false;
        const std::size_t lo = j == 0 ? 0 : j == gn - 1 ? gn - 3 : j - 1;
        const double dpsi = three_point(lo, lo + 1, lo + 2, zq);
        const double s = abel_slack(zq, pq, dpsi);
        if (s < rep.min_slack) {
            rep.min_slack = s;
            rep.min_slack_z = zq;
        }
        // The difference quotient carries truncation error up to the stencil
        // width times the local curvature; grant that much slack on top of
        // the relative tolerance, taking the curvature of the neighboring
        // stencils too so a one-sided kink is covered. Flat candidates get
        // no allowance, so genuine violations still register at full size.
        const double den = abel_denominator(zq, pq);
        double curv_max = std::abs(curvature(lo, lo + 1, lo + 2));
        if (lo > 0) curv_max = std::max(curv_max, std::abs(curvature(lo - 1, lo, lo + 1)));
        if (lo + 3 < gn) curv_max = std::max(curv_max, std::abs(curvature(lo + 1, lo + 2, lo + 3)));
        const double allowance = std::abs(den) * (grid[lo + 2] - grid[lo]) * curv_max;
        const double tol = slack_rel_tol * std::max(1.0, std::abs(abel_numerator(zq, pq))) + allowance;
        if (s < -tol) rep.slack_ok = false;
    }
    rep.pass = rep.psi_nonpositive && rep.monotone && rep.slack_ok;
    return rep;
}

/// CSV with 17 significant digits: z, psi, phi, h, slack, mode.
inline void write_csv(const AbelSolution& sol, std::ostream& out) {
    out << "z,psi,phi,h,slack,mode\n";
    char buf[512];
    for (std::size_t i = 0; i < sol.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.16e,%.16e,%.16e,%.16e,%.16e,%s\n", sol.z[i], sol.psi[i],
                      sol.phi[i], sol.h[i], sol.slack[i], to_string(sol.mode[i]));
        out << buf;
    }
}

inline AbelSolution read_csv(std::istream& in) {
    AbelSolution sol;
    std::string line;
    if (!std::getline(in, line) || line.rfind("z,psi,phi,h,slack,mode", 0) != 0) {
        throw IoError("missing or malformed CSV header");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::array<double, 5> vals{};
        for (auto& val : vals) {
            if (!std::getline(ss, field, ',')) {
                throw IoError("short CSV row at line " + std::to_string(lineno));
            }
            try {
                val = std::stod(field);
            } catch (const std::exception&) {
                throw IoError("bad number '" + field + "' at line " + std::to_string(lineno));
            }
        }
        if (!std::getline(ss, field)) {
            throw IoError("missing mode column at line " + std::to_string(lineno));
        }
        AbelMode mode;
        if (field == "EqualityTracking") {
            mode = AbelMode::EqualityTracking;
        } else if (field == "SlackContinuation") {
            mode = AbelMode::SlackContinuation;
        } else {
            throw IoError("unknown mode '" + field + "' at line " + std::to_string(lineno));
        }
        sol.z.push_back(vals[0]);
        sol.psi.push_back(vals[1]);
        sol.phi.push_back(vals[2]);
        sol.h.push_back(vals[3]);
        sol.slack.push_back(vals[4]);
        sol.mode.push_back(mode);
    }
    if (sol.size() < 2) throw IoError("CSV contains fewer than 2 rows");
    sol.endpoint_estimate = sol.psi.back();
    sol.monotone = true;
    for (std::size_t i = 1; i < sol.size(); ++i) {
        if (sol.psi[i] < sol.psi[i - 1] - 1e-12) sol.monotone = false;
    }
    return sol;
}

}  // namespace wpdi

// Batch verification front end: runs the identity suites, inequality
// sweeps, certificate searches, and the inequality-ODE solver, and emits
// machine-readable JSON reports.
//
// Exit codes: 0 all checks pass, 1 verification failure, 2 input/parse
// error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wpdi/abel.hpp"
#include "wpdi/certify.hpp"
#include "wpdi/errors.hpp"
#include "wpdi/funcdsl.hpp"
#include "wpdi/identities.hpp"
#include "wpdi/parallel.hpp"
#include "wpdi/pdi.hpp"
#include "wpdi/report.hpp"
#include "wpdi/spectrum.hpp"

namespace {

using namespace wpdi;

int verbosity() {
    const char* env = std::getenv("WPDI_VERBOSE");
    return env != nullptr ? std::atoi(env) : 0;
}

void note(const std::string& msg) {
    if (verbosity() >= 1) std::cerr << "[wpdi] " << msg << "\n";
}

struct Check {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

class Timer {
public:
    std::int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/// Prints per-check lines, assembles the report, optionally writes JSON.
int finish(VerificationReport rep, const std::vector<Check>& checks, const Timer& timer,
           const std::string& json_path) {
    bool pass = true;
    for (const Check& c : checks) {
        rep.max_abs_residual = std::max(rep.max_abs_residual, c.residual);
        if (!c.pass) {
            pass = false;
            FailureRecord f;
            f.point = c.name;
            f.values["residual"] = c.residual;
            f.values["tolerance"] = c.tol;
            rep.failures.push_back(std::move(f));
        }
        std::printf("[%s] %-38s residual %.3e (tol %.1e)\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.residual, c.tol);
    }
    rep.pass = pass && rep.failures.empty();
    rep.wall_time_ms = timer.ms();
    if (!json_path.empty()) emit_report(rep, json_path);
    std::printf("%s\n", rep.pass ? "all checks passed" : "VERIFICATION FAILED");
    return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// identities
// ---------------------------------------------------------------------------

std::vector<Check> run_identity_checks(int samples, std::uint64_t seed, double tol_identity,
                                       double tol_i4) {
    std::vector<Check> checks;

    // Gradient/Laplacian formulas over several curvature values.
    const double r_values[] = {0.0, 1.0, -3.0, 10.0};
    double grad = 0.0, lap_x = 0.0, lap_y = 0.0, weitz = 0.0, grad_sum = 0.0;
    for (int rv = 0; rv < 4; ++rv) {
        const auto inputs =
            sample_laplacian_inputs(samples / 4, seed + static_cast<std::uint64_t>(rv), r_values[rv]);
        std::vector<double> g(inputs.size()), lx(inputs.size()), ly(inputs.size()),
            wz(inputs.size()), gs(inputs.size());
        parallel_for(inputs.size(), [&](std::size_t i) {
            g[i] = check_gradients(inputs[i]);
            const auto [rx, ry] = check_laplacians(inputs[i]);
            lx[i] = rx;
            ly[i] = ry;
            wz[i] = weitzenbock_consistency(inputs[i]);
            gs[i] = gradient_sum_norm(inputs[i]);
        });
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            grad = std::max(grad, g[i]);
            lap_x = std::max(lap_x, lx[i]);
            lap_y = std::max(lap_y, ly[i]);
            weitz = std::max(weitz, wz[i]);
            grad_sum = std::max(grad_sum, gs[i]);
        }
    }
    checks.push_back({"gradient formulas", grad, tol_identity, grad <= tol_identity});
    checks.push_back({"laplacian formula (x)", lap_x, tol_identity, lap_x <= tol_identity});
    checks.push_back({"laplacian formula (y)", lap_y, tol_identity, lap_y <= tol_identity});
    checks.push_back({"curvature part reduction", weitz, tol_identity, weitz <= tol_identity});
    checks.push_back({"gradient sum vanishes", grad_sum, tol_identity, grad_sum <= tol_identity});

    // Discriminant identity over sampled spectra.
    {
        const auto spectra = sample(Region::omega(), samples, seed + 17);
        double worst = 0.0;
        for (const Spectrum& s : spectra) {
            const auto p = invariants(s);
            worst = std::max(worst,
                             discriminant_identity(s) / std::max(1.0, p.x * p.x * p.x));
        }
        checks.push_back({"discriminant identity", worst, tol_identity, worst <= tol_identity});
    }

    // Profile-form bracket identity; phi' cancels exactly.
    {
        Rng rng(seed + 23);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double z = rng.uniform(0.0, 0.99 * kZMax);
            const double phi = rng.uniform(-16.0, 0.0);
            const double phip = rng.uniform(-50.0, 700.0);
            const double m = 1.0 - 54.0 * z * z - 9.0 * z * phi;
            const double scale = std::max(1.0, 12.0 * phi * phi + 4.0 * m * m);
            worst = std::max(worst, profile_bracket_identity(z, phi, phip) / scale);
        }
        checks.push_back({"profile bracket identity", worst, tol_identity, worst <= tol_identity});
    }

    // Fourth inequality vanishes on homogeneous variations.
    {
        Rng rng(seed + 31);
        double worst = 0.0;
        const int polys = 10;
        const int points = std::max(100, samples / 10);
        for (int p = 0; p < polys; ++p) {
            std::vector<double> coeffs(static_cast<std::size_t>(2 + p % 7));
            for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
            worst = std::max(worst, check_i4_vanishing(coeffs, points, rng.bits()));
        }
        checks.push_back({"fourth form vanishes on x^(1/6)h(z)", worst, tol_i4, worst <= tol_i4});
    }

    return checks;
}

int cmd_identities(int samples, std::uint64_t seed, double tol, const std::string& json_path) {
    Timer timer;
    note("running identity suite");
    const double tol_identity = tol > 0.0 ? tol : 1e-10;
    const double tol_i4 = tol > 0.0 ? tol : 1e-9;
    const auto checks = run_identity_checks(samples, seed, tol_identity, tol_i4);
    VerificationReport rep;
    rep.command = "identities";
    rep.inputs["samples"] = std::to_string(samples);
    rep.inputs["seed"] = std::to_string(seed);
    rep.inputs["tol"] = tol > 0.0 ? fmt(tol) : "default";
    rep.seed = seed;
    rep.samples = samples;
    return finish(std::move(rep), checks, timer, json_path);
}

// ---------------------------------------------------------------------------
// pdi-sweep
// ---------------------------------------------------------------------------

Region parse_region(const std::string& text) {
    if (text == "omega") return Region::omega();
    if (text == "omega-zero") return Region::omega_zero();
    const std::string prefix = "omega-delta:";
    if (text.rfind(prefix, 0) == 0) {
        const double d = std::stod(text.substr(prefix.size()));
        return Region::omega_delta(d);
    }
    throw CLI::ValidationError("--region", "expected omega, omega-delta:<d>, or omega-zero");
}

int cmd_pdi_sweep(const std::string& function, const std::string& region_text, double R,
                  int samples, std::uint64_t seed, double margin, double tol,
                  const std::string& json_path) {
    Timer timer;
    const ExprAst ast = parse(function, ExprMode::FunctionXY);
    const Region region = parse_region(region_text);
    const auto spectra = sample(region, samples, seed);
    const PdiContext ctx{R};

    struct PointResult {
        PdiValues v;
        bool singular = false;
    };
    std::vector<PointResult> results(spectra.size());
    parallel_for(spectra.size(), [&](std::size_t i) {
        const auto p = invariants(spectra[i]);
        const Jet2 j = eval_jet(ast, p.x, p.y);
        if (j.singular) {
            results[i].singular = true;
            return;
        }
        results[i].v = closed_form(p.x, p.y, j, ctx);
    });

    int strict = 0, borderline = 0, violated = 0, singular = 0;
    double min_value = std::numeric_limits<double>::infinity();
    VerificationReport rep;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (r.singular) {
            ++singular;
            continue;
        }
        // The first and fourth are nonstrict; the middle two are strict and
        // judged against the configurable margin.
        const double strict_min = std::min(r.v.I2, r.v.I3);
        const double nonstrict_min = std::min(r.v.I1, r.v.I4);
        const double point_min = std::min(strict_min, nonstrict_min);
        min_value = std::min(min_value, point_min);
        if (strict_min > margin && nonstrict_min >= 0.0) {
            ++strict;
        } else if (point_min >= -tol) {
            ++borderline;
        } else {
            ++violated;
            if (rep.failures.size() < 100) {
                const auto p = invariants(spectra[i]);
                FailureRecord f;
                f.point = "sample " + std::to_string(i) + " at (x=" + fmt(p.x) +
                          ", y=" + fmt(p.y) + ")";
                f.values["I1"] = r.v.I1;
                f.values["I2"] = r.v.I2;
                f.values["I3"] = r.v.I3;
                f.values["I4"] = r.v.I4;
                rep.failures.push_back(std::move(f));
            }
        }
    }

    std::printf("function:            %s\n", function.c_str());
    std::printf("region:              %s, R = %s, %d samples\n", region_text.c_str(), fmt(R).c_str(),
                samples);
    std::printf("strictly positive:   %d\n", strict);
    std::printf("nonneg within tol:   %d\n", borderline);
    std::printf("violated:            %d\n", violated);
    if (singular > 0) std::printf("singular points:     %d\n", singular);
    std::printf("min inequality value: %.6e\n", min_value);

    rep.command = "pdi-sweep";
    rep.inputs["function"] = function;
    rep.inputs["region"] = region_text;
    rep.inputs["R"] = fmt(R);
    rep.inputs["samples"] = std::to_string(samples);
    rep.inputs["seed"] = std::to_string(seed);
    rep.inputs["margin"] = fmt(margin);
    rep.inputs["tol"] = fmt(tol);
    rep.seed = seed;
    rep.samples = samples;
    rep.max_abs_residual = std::max(0.0, -min_value);
    rep.pass = violated == 0;
    rep.wall_time_ms = timer.ms();
    if (!json_path.empty()) emit_report(rep, json_path);
    std::printf("%s\n", rep.pass ? "all checks passed" : "VERIFICATION FAILED");
    return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// certify-fk
// ---------------------------------------------------------------------------

int cmd_certify_fk(double delta1, double delta2, double rmin, const std::string& json_path) {
    Timer timer;
    const std::int64_t k0 = fk_min_k(delta1, delta2, rmin);
    std::printf("k0 = %lld\n", static_cast<long long>(k0));
    std::vector<Check> checks;
    if (k0 <= 64) {
        const double dev = fk_crosscheck(k0, std::max(rmin, 0.0) + 1.0, 1000, 1234);
        checks.push_back({"closed forms vs jet evaluation at k0", dev, 1e-10, dev <= 1e-10});
    }
    const double b2 = fk_i2_bracket(k0, delta1 * delta1);
    const double b3 = fk_i3_bracket(k0, delta1 * delta1);
    std::printf("brackets at z = delta1: I2 %.6g, I3 %.6g\n", b2, b3);

    // Strict positivity away from the 1 - 54 z^2 = 0 boundary, with a
    // relative margin: the brackets must clear 1e-12 of their own scale on
    // a dense w-grid of the subregion.
    {
        const double w_lo = std::min(delta1 * delta1, 1.0 / 54.0);
        double scale2 = 0.0, scale3 = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double w = w_lo + (1.0 / 54.0 - w_lo) * i / 1000.0;
            scale2 = std::max(scale2, std::abs(fk_i2_bracket(k0, w)));
            scale3 = std::max(scale3, std::abs(fk_i3_bracket(k0, w)));
        }
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 1000; ++i) {
            const double w = w_lo + (1.0 / 54.0 - w_lo) * i / 1000.0;
            worst = std::min({worst, fk_i2_bracket(k0, w) / std::max(1.0, scale2),
                              fk_i3_bracket(k0, w) / std::max(1.0, scale3)});
        }
        checks.push_back({"strict bracket margin on the subregion", std::max(0.0, -worst), 1e-12,
                          worst > 1e-12});
    }
    VerificationReport rep;
    rep.command = "certify-fk";
    rep.inputs["delta1"] = fmt(delta1);
    rep.inputs["delta2"] = fmt(delta2);
    rep.inputs["rmin"] = fmt(rmin);
    rep.inputs["k0"] = std::to_string(k0);
    return finish(std::move(rep), checks, timer, json_path);
}

// ---------------------------------------------------------------------------
// abel / abel-verify
// ---------------------------------------------------------------------------

int cmd_abel(double psi0, double step_tol, double eps_end, const std::string& out_path,
             const std::string& json_path) {
    Timer timer;
    const AbelSolution sol = abel_solve(psi0, step_tol, eps_end);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw IoError("cannot open output path: " + out_path);
        write_csv(sol, out);
    }
    double min_slack = std::numeric_limits<double>::infinity();
    for (double s : sol.slack) min_slack = std::min(min_slack, s);
    std::printf("nodes:             %zu\n", sol.size());
    std::printf("endpoint estimate: %.12f (target %.12f)\n", sol.endpoint_estimate,
                -3.0 * kSqrt6);
    std::printf("monotone:          %s\n", sol.monotone ? "yes" : "no");
    std::printf("min slack:         %.3e\n", min_slack);
    std::printf("h(z_end):          %.6e\n", sol.h.back());
    if (!out_path.empty()) std::printf("wrote %s\n", out_path.c_str());

    std::vector<Check> checks;
    const double endpoint_dev = std::abs(sol.endpoint_estimate - (-3.0 * kSqrt6));
    checks.push_back({"psi nonpositive and monotone", sol.monotone ? 0.0 : 1.0, 0.5, sol.monotone});
    checks.push_back({"inequality slack at nodes", std::max(0.0, -min_slack), 1e-8,
                      min_slack >= -1e-8});
    checks.push_back({"endpoint estimate near -3 sqrt 6", endpoint_dev, 1e-4, endpoint_dev <= 1e-4});
    VerificationReport rep;
    rep.command = "abel";
    rep.inputs["psi0"] = fmt(psi0);
    rep.inputs["step_tol"] = fmt(step_tol);
    rep.inputs["eps_end"] = fmt(eps_end);
    rep.inputs["out"] = out_path;
    rep.samples = static_cast<std::int64_t>(sol.size());
    return finish(std::move(rep), checks, timer, json_path);
}

int cmd_abel_verify(const std::string& in_path, int grid_n, double slack_tol,
                    const std::string& json_path) {
    Timer timer;
    std::ifstream in(in_path);
    if (!in) throw IoError("cannot open input path: " + in_path);
    const AbelSolution sol = read_csv(in);
    const AbelVerifyReport vr = abel_verify(sol, grid_n, slack_tol);
    std::printf("nodes checked:    %d\n", vr.nodes);
    std::printf("psi <= 0:         %s (max psi %.3e)\n", vr.psi_nonpositive ? "yes" : "NO",
                vr.max_psi);
    std::printf("monotone:         %s\n", vr.monotone ? "yes" : "NO");
    std::printf("slack ok:         %s (min %.3e at z = %.6g)\n", vr.slack_ok ? "yes" : "NO",
                vr.min_slack, vr.min_slack_z);
    VerificationReport rep;
    rep.command = "abel-verify";
    rep.inputs["in"] = in_path;
    rep.inputs["grid_n"] = std::to_string(grid_n);
    rep.samples = vr.nodes;
    std::vector<Check> checks;
    checks.push_back({"psi nonpositive", std::max(0.0, vr.max_psi), 1e-12, vr.psi_nonpositive});
    checks.push_back({"psi monotone", vr.monotone ? 0.0 : 1.0, 0.5, vr.monotone});
    checks.push_back({"inequality slack", std::max(0.0, -vr.min_slack), slack_tol, vr.slack_ok});
    return finish(std::move(rep), checks, timer, json_path);
}

// ---------------------------------------------------------------------------
// kato
// ---------------------------------------------------------------------------

int cmd_kato(double alpha, int samples, std::uint64_t seed, const std::string& json_path) {
    Timer timer;
    const KatoMinimality km = kato_minimality(alpha);
    std::vector<Check> checks;
    if (!km.nonnegative_for_all) {
        std::printf("counterexample: p = %g, q = %g, x = %g, derivative part = %.6e\n",
                    km.counterexample.p, km.counterexample.q, km.counterexample.x, km.value);
        checks.push_back({"derivative part nonnegative", -km.value, 0.0, false});
    } else {
        Rng rng(seed);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double p = rng.uniform(0.0, 5.0);
            const double q = rng.uniform(5.0 / 3.0 * p, 10.0 * p);
            const double x = rng.uniform(0.1, 10.0);
            worst = std::min(worst, kato_delta_d(alpha, KatoPoint{p, q, x}));
        }
        std::printf("nonnegative for all constraint-satisfying points (sampled min %.3e)\n",
                    worst);
        checks.push_back({"derivative part nonnegative", std::max(0.0, -worst), 1e-12,
                          worst >= -1e-12});
    }
    VerificationReport rep;
    rep.command = "kato";
    rep.inputs["alpha"] = fmt(alpha);
    rep.inputs["samples"] = std::to_string(samples);
    rep.seed = seed;
    rep.samples = samples;
    return finish(std::move(rep), checks, timer, json_path);
}

// ---------------------------------------------------------------------------
// report: the full battery
// ---------------------------------------------------------------------------

int cmd_report(const std::string& json_path, std::uint64_t seed) {
    Timer timer;
    std::vector<Check> checks;
    note("running full verification battery");

    // Algebraic bound over a large seeded family.
    {
        const auto spectra = sample(Region::omega(), 100000, seed);
        double worst = 0.0;
        for (const Spectrum& s : spectra) {
            const auto b = algebraic_bound(s);
            worst = std::max(worst, b.lhs - b.rhs);
        }
        checks.push_back({"algebraic bound", std::max(0.0, worst), 1e-10, worst <= 1e-10});
    }

    for (auto& c : run_identity_checks(10000, seed, 1e-10, 1e-9)) checks.push_back(std::move(c));

    // Closed forms vs coefficient combinations.
    {
        const auto ec = equivalence_constants(10000, seed + 41, PdiContext{1.0});
        const double dev = std::max({std::abs(ec.c2 - 2.0), std::abs(ec.c3 - 1.0),
                                     std::abs(ec.c4 - 0.25), ec.max_rel_dev});
        checks.push_back({"equivalence constants (2, 1, 1/4)", dev, 1e-8, dev <= 1e-8});
    }

    // Candidate family cross-checks.
    {
        double worst = 0.0;
        for (std::int64_t k : {1, 2, 3, 5}) {
            for (double R : {0.0, 1.0, 10.0}) {
                worst = std::max(worst, fk_crosscheck(k, R, 1000, seed + static_cast<std::uint64_t>(k)));
            }
        }
        checks.push_back({"candidate family closed forms", worst, 1e-10, worst <= 1e-10});
        const bool min_k_ok = fk_min_k(0.1, 0.01, 1.0) == 2;
        checks.push_back({"minimal exponent search", min_k_ok ? 0.0 : 1.0, 0.5, min_k_ok});
    }

    // Inequality ODE solution.
    {
        const AbelSolution sol = abel_solve(-6.0 * kSqrt6, 1e-10, 1e-6);
        double min_slack = std::numeric_limits<double>::infinity();
        for (double s : sol.slack) min_slack = std::min(min_slack, s);
        const double endpoint_dev = std::abs(sol.endpoint_estimate + 3.0 * kSqrt6);
        const bool ok = sol.monotone && min_slack >= -1e-8 && endpoint_dev <= 1e-4;
        checks.push_back({"inequality ODE candidate", std::max(endpoint_dev, -min_slack), 1e-4, ok});
        const auto vr = abel_verify(sol, 4001);
        checks.push_back({"independent ODE re-verification", vr.pass ? 0.0 : 1.0, 0.5, vr.pass});
    }

    // Kato derivative part.
    {
        Rng rng(seed + 59);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double p = rng.uniform(0.0, 5.0);
            const double q = rng.uniform(5.0 / 3.0 * p, 10.0 * p);
            const double x = rng.uniform(0.1, 10.0);
            worst = std::min(worst, kato_delta_d(1.0 / 6.0, KatoPoint{p, q, x}));
        }
        const bool minimal = !kato_minimality(0.16).nonnegative_for_all &&
                             !kato_minimality(0.166).nonnegative_for_all &&
                             !kato_minimality(1.0 / 6.0 - 1e-6).nonnegative_for_all &&
                             kato_minimality(1.0 / 6.0).nonnegative_for_all;
        checks.push_back({"kato derivative part at 1/6", std::max(0.0, -worst), 1e-12,
                          worst >= -1e-12 && minimal});
    }

    // Positivity reduction soundness.
    {
        Rng rng(seed + 67);
        double worst = 0.0;
        int accepted = 0;
        while (accepted < 1000) {
            QFormCoeffs c{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                          rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            if (!sylvester_reduce(c).pass) continue;
            ++accepted;
            for (int g = 0; g < 1000; ++g) {
                double v[3][3];
                for (auto& row : v) {
                    for (double& e : row) e = rng.uniform(-1.0, 1.0);
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
                worst = std::min(worst, quadratic_form_value(c, vt));
            }
        }
        checks.push_back({"positivity reduction soundness", std::max(0.0, -worst), 1e-10,
                          worst >= -1e-10});
    }

    VerificationReport rep;
    rep.command = "report";
    rep.inputs["seed"] = std::to_string(seed);
    rep.seed = seed;
    rep.samples = 0;
    return finish(std::move(rep), checks, timer, json_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for the self-dual Weyl inequality system"};
    app.require_subcommand(1);

    // identities
    auto* id = app.add_subcommand("identities", "randomized checks of the eigenvalue-field identities");
    int id_samples = 10000;
    std::uint64_t id_seed = 42;
    double id_tol = 0.0;
    std::string id_json;
    id->add_option("--samples", id_samples, "samples per check")->check(CLI::PositiveNumber);
    id->add_option("--seed", id_seed, "RNG seed");
    id->add_option("--tol", id_tol, "override the per-check tolerances");
    id->add_option("--json", id_json, "write a JSON report here");

    // pdi-sweep
    auto* sw = app.add_subcommand("pdi-sweep", "evaluate the inequality system for a candidate f");
    std::string sw_function, sw_region = "omega", sw_json;
    double sw_r = 1.0, sw_margin = 0.0, sw_tol = 1e-10;
    int sw_samples = 1000;
    std::uint64_t sw_seed = 42;
    sw->add_option("--function", sw_function, "candidate f(x, y), e.g. \"x^(1/6)*(1-54*z^2)^3\"")
        ->required();
    sw->add_option("--region", sw_region, "omega | omega-delta:<d> | omega-zero");
    sw->add_option("--R", sw_r, "scalar curvature parameter");
    sw->add_option("--samples", sw_samples, "number of sampled points")->check(CLI::PositiveNumber);
    sw->add_option("--seed", sw_seed, "RNG seed");
    sw->add_option("--margin", sw_margin, "strict-positivity margin for the middle inequalities");
    sw->add_option("--tol", sw_tol, "violation tolerance");
    sw->add_option("--json", sw_json, "write a JSON report here");

    // certify-fk
    auto* fk = app.add_subcommand("certify-fk", "minimal exponent for the candidate family");
    double fk_d1 = 0.0, fk_d2 = 0.0, fk_rmin = 0.0;
    std::string fk_json;
    fk->add_option("--delta1", fk_d1, "lower bound for z")->required();
    fk->add_option("--delta2", fk_d2, "lower bound for y/x")->required();
    fk->add_option("--rmin", fk_rmin, "lower bound for the scalar curvature")->required();
    fk->add_option("--json", fk_json, "write a JSON report here");

    // abel
    auto* ab = app.add_subcommand("abel", "solve the constrained inequality ODE");
    double ab_psi0 = -6.0 * kSqrt6, ab_step_tol = 1e-10, ab_eps = 1e-6;
    std::string ab_out, ab_json;
    ab->add_option("--psi0", ab_psi0, "initial value psi(0)");
    ab->add_option("--step-tol", ab_step_tol, "integrator tolerance and slack guard");
    ab->add_option("--eps-end", ab_eps, "distance kept from the singular endpoint");
    ab->add_option("--out", ab_out, "CSV output path");
    ab->add_option("--json", ab_json, "write a JSON report here");

    // abel-verify
    auto* av = app.add_subcommand("abel-verify", "re-check a solution CSV independently");
    std::string av_in, av_json;
    int av_grid = 4001;
    double av_slack_tol = 1e-3;
    av->add_option("--in", av_in, "CSV produced by the abel subcommand")->required();
    av->add_option("--grid-n", av_grid, "refinement size")->check(CLI::PositiveNumber);
    av->add_option("--slack-tol", av_slack_tol, "relative slack tolerance");
    av->add_option("--json", av_json, "write a JSON report here");

    // kato
    auto* ka = app.add_subcommand("kato", "derivative part of x^alpha under the gradient bound");
    double ka_alpha = 1.0 / 6.0;
    int ka_samples = 10000;
    std::uint64_t ka_seed = 42;
    std::string ka_json;
    ka->add_option("--alpha", ka_alpha, "exponent")->required();
    ka->add_option("--samples", ka_samples, "sampled constraint points")->check(CLI::PositiveNumber);
    ka->add_option("--seed", ka_seed, "RNG seed");
    ka->add_option("--json", ka_json, "write a JSON report here");

    // report
    auto* rp = app.add_subcommand("report", "run the full battery and write one JSON report");
    std::string rp_json;
    std::uint64_t rp_seed = 42;
    rp->add_option("--json", rp_json, "report path")->required();
    rp->add_option("--seed", rp_seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (id->parsed()) return cmd_identities(id_samples, id_seed, id_tol, id_json);
        if (sw->parsed()) {
            return cmd_pdi_sweep(sw_function, sw_region, sw_r, sw_samples, sw_seed, sw_margin,
                                 sw_tol, sw_json);
        }
        if (fk->parsed()) return cmd_certify_fk(fk_d1, fk_d2, fk_rmin, fk_json);
        if (ab->parsed()) return cmd_abel(ab_psi0, ab_step_tol, ab_eps, ab_out, ab_json);
        if (av->parsed()) return cmd_abel_verify(av_in, av_grid, av_slack_tol, av_json);
        if (ka->parsed()) return cmd_kato(ka_alpha, ka_samples, ka_seed, ka_json);
        if (rp->parsed()) return cmd_report(rp_json, rp_seed);
    } catch (const SyntaxError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ModeError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ExponentError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const NoSolution& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

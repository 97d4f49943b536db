// Acceptance gate: one PASS/FAIL line per criterion.
//
// Exit status is 0 when the set of failing criteria equals the --expect-fail list
// (empty by default), 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scherk/barriers.hpp"
#include "scherk/errors.hpp"
#include "scherk/hgeom.hpp"
#include "scherk/radial_solver.hpp"
#include "scherk/shooting.hpp"
#include "scherk/verify.hpp"

using namespace scherk;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PsiEnvelope zero_env(int n) { return PsiEnvelope(DecaySpec::zero(), HeightSpec::zero(), 0.0, n); }

ShootingConfig anchored(const PsiEnvelope& env, double d0) {
    SolverOptions opt;
    opt.d0 = d0;
    return make_config(env, opt);
}

Verdict zero_envelope_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    double worst_gamma = 0, worst_G = 0;
    for (int n : {2, 3, 5}) {
        PsiEnvelope z = zero_env(n);
        for (double d0 : {0.5, 1.0, 2.0}) {
            ShootingConfig cfg = anchored(z, d0);
            EllResult e = ell(z, cfg, 0.0);
            double G0 = -std::pow(std::cosh(d0), 1.0 - n);
            worst_gamma = std::max(worst_gamma, std::abs(e.g0.gamma0 - G0) / std::abs(G0));
            for (const Trajectory* tr : {&e.g0.witness(), static_cast<const Trajectory*>(&e.forward)})
                for (const OdeState& s : tr->samples)
                    if (s.d >= 0.05 && s.d <= 20.0)
                        worst_G = std::max(worst_G, std::abs(s.g + std::pow(std::cosh(s.d), 1.0 - n)));
        }
    }
    double dt = seconds_since(t0);
    return {worst_gamma <= 1e-8 && worst_G <= 1e-7 && dt < 2.0,
            fmt("gamma0 rel err %.2e, |g - G| sup %.2e, %.2f s", worst_gamma, worst_G, dt)};
}

Verdict explicit_w_oracle() {
    PsiEnvelope z = zero_env(2);
    ShootingConfig cfg = anchored(z, 1.0);
    EllResult e = ell(z, cfg, 0.0);
    double worst = 0;
    for (const OdeState& s : full_profile(e.g0.witness(), e.forward))
        if (s.d >= 0.05 && s.d <= 20.0)
            worst = std::max(worst, std::abs(s.w - std::log(std::tanh(0.5) / std::tanh(0.5 * s.d))));
    double err_l = 0;
    for (double h : {-2.0, 0.0, 3.0})
        err_l = std::max(err_l, std::abs(ell(z, cfg, h).value - (h + std::log(std::tanh(0.5)))));
    return {worst <= 1e-6 && err_l <= 1e-6, fmt("|w - W| sup %.2e, |l(h) - h - ln tanh(1/2)| %.2e", worst, err_l)};
}

struct SuiteRows {
    int failures = 0;
    int rows = 0;
    double worst = INFINITY;
    std::string worst_id;
};

SuiteRows rows_for(const VerificationReport& r, const std::vector<std::string>& ids) {
    SuiteRows s;
    for (const PropertyReport& p : r.properties) {
        if (std::find(ids.begin(), ids.end(), p.id) == ids.end()) continue;
        ++s.rows;
        s.failures += p.failures;
        if (p.worst_margin < s.worst) {
            s.worst = p.worst_margin;
            s.worst_id = p.id + " n=" + std::to_string(p.n);
        }
    }
    return s;
}

Verdict suite_outcome(const VerificationReport& r, const std::vector<std::string>& ids, double runtime,
                      double budget) {
    SuiteRows s = rows_for(r, ids);
    bool ok = s.failures == 0 && s.rows == static_cast<int>(ids.size()) * 3 && runtime < budget;
    return {ok, std::to_string(s.rows) + " rows, " + std::to_string(s.failures) + " failures, worst margin " +
                    fmt("%.2e", s.worst) + " (" + s.worst_id + ")" + fmt(", suite %.1f s", runtime)};
}

EnvelopeContext sech_ctx(int n) { return EnvelopeContext{DecaySpec::sech(1, 1), HeightSpec::sech(1, 1), n, SolverOptions{}}; }

Verdict uniform_bound() {
    auto t0 = std::chrono::steady_clock::now();
    EnvelopeContext ctx = sech_ctx(2);
    double c0 = c0_threshold(ctx);
    std::vector<double> base, ext;
    for (int k = -5; k <= 5; ++k) base.push_back(k);
    ext = base;
    for (double o : {-7.5, -7.0, -6.0, 6.0, 7.0, 7.5}) ext.push_back(o);
    UniformBoundReport a = uniform_bound_experiment(ctx, c0, base, 4.0);
    UniformBoundReport b = uniform_bound_experiment(ctx, c0, ext, 4.0);
    bool below = std::all_of(a.per_offset.begin(), a.per_offset.end(),
                             [&](const OffsetSup& o) { return std::isfinite(o.sup) && o.sup <= a.M_observed; });
    double growth = (b.M_observed - a.M_observed) / std::abs(a.M_observed);
    double dt = seconds_since(t0);
    return {below && std::abs(growth) < 0.01 && dt < 30.0,
            fmt("c0 %.6f, M(+-5) %.6f, M(+-7.5) %.6f", c0, a.M_observed, b.M_observed) +
                fmt(", growth %.3f%%, %.1f s", 100 * growth, dt)};
}

Verdict radial_barrier_check() {
    DecaySpec phi = DecaySpec::sech(1, 1);
    double ref = std::log(std::cosh(1.0)) / std::sinh(1.0);
    double err = std::abs(rho_tilde(2, phi, 1.0) - ref);
    bool ok = err <= 1e-8;
    double worst_tail = 0;
    for (double M : {0.0, 1.0}) {
        RadialBarrier b = radial_barrier(2, phi, M);
        ok = ok && b.sup_rho < 1.0;
        for (std::size_t i = 0; i + 1 < b.v.size(); ++i) ok = ok && std::isfinite(b.v[i]) && b.v[i] >= b.v[i + 1];
        worst_tail = std::max(worst_tail, std::abs(b.eval(25.0) - M));
    }
    ok = ok && worst_tail <= 1e-6;
    bool rejected = false;
    try {
        radial_barrier(2, DecaySpec::sech(10, 0.01), 0.0);
    } catch (const Error& e) {
        rejected = e.kind() == ErrorKind::CothBoundViolated;
    }
    return {ok && rejected, fmt("rho~(1) err %.2e, |v(25) - M| %.2e", err, worst_tail) +
                                (rejected ? ", coth control rejected" : ", coth control NOT rejected")};
}

Verdict hemisphere() {
    bool ok = true;
    double worst_r = 0, worst_bc = 0;
    int sweeps = 0;
    for (double H : {1.5, 2.0, 3.0}) {
        double rs = 2 * std::atanh(1 / H);
        for (double scale : {1.01, 1.5}) {
            RadialProblem p;
            p.n = 2;
            p.R = scale * rs;
            p.c = 0.0;
            p.f = RadialSource::constant(H);
            RadialSolution s = solve_radial_dirichlet(p);
            ok = ok && s.outcome == RadialOutcome::GradientBlowup;
            worst_r = std::max(worst_r, std::abs(s.r_star - rs));
            for (const SweepPoint& pt : s.sweep) {
                ok = ok && pt.outcome == RadialOutcome::GradientBlowup;
                ++sweeps;
            }
        }
        RadialProblem in;
        in.n = 2;
        in.R = 0.9 * rs;
        in.c = 0.0;
        in.f = RadialSource::constant(H);
        RadialSolution s = solve_radial_dirichlet(in);
        ok = ok && s.outcome == RadialOutcome::Solved;
        worst_bc = std::max(worst_bc, std::abs(s.w_R - in.c));
    }
    ok = ok && worst_r <= 1e-3 && worst_bc <= 1e-8;
    return {ok, fmt("|r* - 2 artanh(1/H)| %.2e, %.0f sweep points blow up, |w(R) - c| %.2e", worst_r, sweeps,
                    worst_bc)};
}

// Distance to the wall through ray_point(p, t) orthogonal to the ray, by scanning the wall.
double brute_wall_distance(const BallPoint& x, const BoundaryPoint& p, double t) {
    const Vec& u = p.direction();
    Vec perp{-u[1], u[0]};
    BallPoint a = ray_point(p, t);
    auto at = [&](double s) {
        double r = std::tanh(0.5 * std::abs(s)) * (s < 0 ? -1 : 1);
        return geodesic_distance(x, mobius_add(a, BallPoint({r * perp[0], r * perp[1]})));
    };
    double best = INFINITY, s_best = 0;
    for (int j = -2000; j <= 2000; ++j) {
        double s = j * 1e-2, v = at(s);
        if (v < best) best = v, s_best = s;
    }
    double lo = s_best - 1e-2, hi = s_best + 1e-2;
    for (int it = 0; it < 100; ++it) {
        double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        (at(m1) < at(m2) ? hi : lo) = (at(m1) < at(m2) ? m2 : m1);
    }
    return std::min(best, at(0.5 * (lo + hi)));
}

Verdict geometry() {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(0, 1);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        double th = 2 * M_PI * U(rng);
        BoundaryPoint p = BoundaryPoint::normalized({std::cos(th), std::sin(th)});
        double t = 0.05 + 3 * U(rng);
        double r = 0.95 * std::sqrt(U(rng)), ph = 2 * M_PI * U(rng);
        BallPoint x({r * std::cos(ph), r * std::sin(ph)});
        double d = signed_wall_distance(x, wall_concentric_at(p, t));
        worst = std::max(worst, std::abs(std::abs(d) - brute_wall_distance(x, p, t)));
    }
    double ln3 = geodesic_distance(BallPoint::origin(2), BallPoint({0.5, 0.0}));
    double e3 = std::abs(ln3 - std::log(3.0));
    return {worst <= 2e-3 && e3 <= 1e-14, fmt("200 pairs, max brute-force gap %.2e, |d - ln 3| %.1e", worst, e3)};
}

Verdict squeeze() {
    const double t0 = 8.0, c = 0.0, eps = 0.1;
    BoundaryPoint p = BoundaryPoint::normalized({0.6, 0.8});
    std::vector<double> ts;
    for (double t = t0 + 10; t <= 27.0; t += 1.0) ts.push_back(t);
    auto trace = squeeze_trace(sech_ctx(2), p, t0, c, eps, ts);
    double worst = -INFINITY;
    for (const SqueezePoint& s : trace) worst = std::max(worst, s.value - (c + eps));
    return {worst <= 1e-3, fmt("t0 %.0f, t in [18, 27], max excess over c + eps %.2e", t0, worst)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app("acceptance gate");
    std::vector<int> expected;
    app.add_option("--expect-fail", expected, "criteria known to fail; exit 0 only if exactly these fail");
    CLI11_PARSE(app, argc, argv);

    std::vector<std::pair<int, std::function<Verdict()>>> crit;
    crit.emplace_back(1, zero_envelope_oracle);
    crit.emplace_back(2, explicit_w_oracle);

    VerificationReport first, second;
    double first_time = 0;
    auto run_default = [&] {
        auto t0 = std::chrono::steady_clock::now();
        first = run_plan(default_plan());
        first_time = seconds_since(t0);
    };
    const std::vector<std::string> lemma_ids{"shooting.cosh_g_monotone", "shooting.g_derivative_bound",
                                             "shooting.g_bounds_forward", "shooting.sign_persistence",
                                             "shooting.g_below_G",       "shooting.w_above_W",
                                             "shooting.w_decreasing_above_c", "shooting.ell_sigma",
                                             "shooting.integral_residuals"};
    crit.emplace_back(3, [&] {
        run_default();
        return suite_outcome(first, lemma_ids, first_time, 60.0);
    });
    crit.emplace_back(4, [&] { return suite_outcome(first, {"shooting.blowup_divergence"}, first_time, 60.0); });
    crit.emplace_back(5, [&] { return suite_outcome(first, {"shooting.solve_height"}, first_time, 60.0); });
    crit.emplace_back(6, uniform_bound);
    crit.emplace_back(7, radial_barrier_check);
    crit.emplace_back(8, hemisphere);
    crit.emplace_back(9, geometry);
    crit.emplace_back(10, squeeze);
    crit.emplace_back(11, [&] {
        second = run_plan(default_plan());
        std::string a = dump(to_json(first)), b = dump(to_json(second));
        return Verdict{a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "DIFFERENT")};
    });

    std::set<int> failed;
    for (auto& [id, fn] : crit) {
        Verdict o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) failed.insert(id);
        std::printf("criterion %2d %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::set<int> want(expected.begin(), expected.end());
    std::printf("%zu/%zu criteria pass", crit.size() - failed.size(), crit.size());
    if (!want.empty()) std::printf(" (expected failures:%s)", [&] {
        std::string s;
        for (int i : want) s += " " + std::to_string(i);
        return s;
    }().c_str());
    std::printf("\n");
    return failed == want ? 0 : 1;
}

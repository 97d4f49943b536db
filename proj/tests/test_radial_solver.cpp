#include <doctest.h>

#include <cmath>

#include "scherk/errors.hpp"
#include "scherk/radial_solver.hpp"

using namespace scherk;

namespace {

RadialProblem problem(int n, double R, double c, RadialSource f) {
    RadialProblem p;
    p.n = n;
    p.R = R;
    p.c = c;
    p.f = f;
    return p;
}

}  // namespace

TEST_CASE("zero source keeps constants") {
    for (int n : {2, 3, 5}) {
        RadialProblem p = problem(n, 2.0, 0.0, RadialSource::constant(0.0));
        RadialSolution s = integrate_radial(p, 1.25);
        CHECK(s.outcome == RadialOutcome::Solved);
        for (const RadialSample& x : s.samples) {
            CHECK(x.w == 1.25);
            CHECK(x.g == 0.0);
        }
        p.c = -0.6;
        RadialSolution d = solve_radial_dirichlet(p);
        for (const RadialSample& x : d.samples) CHECK(x.w == doctest::Approx(-0.6).epsilon(1e-14));
    }
}

TEST_CASE("constant source below the hemisphere radius") {
    // H = 1, n = 2 never blows up; the horosphere-type graph over B_1 has w0 = 2(cosh(1/2) - 1)
    RadialProblem p = problem(2, 1.0, 0.0, RadialSource::constant(1.0));
    RadialSolution s = solve_radial_dirichlet(p);
    REQUIRE(s.outcome == RadialOutcome::Solved);
    CHECK(std::abs(s.w_R) <= 1e-10);
    CHECK(s.center_value == doctest::Approx(2 * (std::cosh(0.5) - 1)).epsilon(1e-9));
    CHECK(s.center_value == doctest::Approx(0.255251930413).epsilon(1e-10));
    RadialProblem fine = p;
    fine.opt.rk_tol = 1e-12;
    CHECK(std::abs(solve_radial_dirichlet(fine).center_value - s.center_value) < 1e-6);
    CHECK(std::isinf(hemisphere_radius(1.0)));
}

TEST_CASE("hemisphere obstruction") {
    CHECK(hemisphere_radius(2.0) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    RadialProblem p = problem(2, 1.2, 0.0, RadialSource::constant(2.0));
    RadialSolution s = solve_radial_dirichlet(p);
    CHECK(s.outcome == RadialOutcome::GradientBlowup);
    CHECK(s.r_star == doctest::Approx(1.0986).epsilon(1e-4));
    CHECK(std::abs(s.r_star - std::log(3.0)) < 1e-9);
    for (const SweepPoint& pt : s.sweep) CHECK(pt.outcome == RadialOutcome::GradientBlowup);

    struct Case {
        double H, w0;
    };
    for (Case cs : {Case{1.5, 1.10196320586}, Case{2.0, 0.681732691746}, Case{3.0, 0.406629545758}}) {
        double rs = hemisphere_radius(cs.H);
        RadialSolution probe = integrate_radial(problem(2, 2 * rs, 0.0, RadialSource::constant(cs.H)), 0.0);
        CHECK(probe.outcome == RadialOutcome::GradientBlowup);
        CHECK(std::abs(probe.r_star - rs) < 1e-9);
        RadialSolution in = solve_radial_dirichlet(problem(2, 0.9 * rs, 0.0, RadialSource::constant(cs.H)));
        REQUIRE(in.outcome == RadialOutcome::Solved);
        CHECK(std::abs(in.w_R) <= 1e-8);
        CHECK(in.center_value == doctest::Approx(cs.w0).epsilon(1e-9));
    }
}

TEST_CASE("flux identity and monotone shooting map") {
    RadialProblem a = problem(3, 2.5, 1.0, RadialSource::radial_decay(DecaySpec::sech(1.5, 1.0), 1));
    RadialSolution s = solve_radial_dirichlet(a);
    REQUIRE(s.outcome == RadialOutcome::Solved);
    CHECK(flux_residual(a, s) < 1e-10);
    CHECK(s.monotone_map);
    double prev = -1e300;
    for (const SweepPoint& pt : s.sweep) {
        CHECK(pt.end_value >= prev);
        prev = pt.end_value;
    }

    RadialProblem b = problem(2, 2.0, 0.5, RadialSource::separable(DecaySpec::sech(0.8, 1.0), HeightSpec::gauss(1.0, 0.5), -1));
    RadialSolution t = solve_radial_dirichlet(b);
    REQUIRE(t.outcome == RadialOutcome::Solved);
    CHECK(std::abs(t.w_R - 0.5) <= 1e-10);
    CHECK(flux_residual(b, t) < 1e-10);
}

TEST_CASE("separable sources are nonincreasing in t") {
    for (int sign : {1, -1}) {
        RadialSource f = RadialSource::separable(DecaySpec::sech(1, 1), HeightSpec::sech(1, 1), sign);
        for (double r : {0.0, 1.0, 3.0})
            for (double t = -5; t < 5; t += 0.25) CHECK(f(r, t + 0.25) <= f(r, t));
    }
}

TEST_CASE("comparison with the radial barrier") {
    RadialProblem p = problem(2, 3.0, 0.0, RadialSource::radial_decay(DecaySpec::sech(1, 1), 1));
    BarrierComparison c = compare_with_radial_barrier(p, 0.0);
    CHECK(c.below);
    CHECK(c.max_excess < 0.0);
    RadialProblem big = problem(2, 3.0, 0.0, RadialSource::radial_decay(DecaySpec::sech(1.5, 1), 1));
    RadialSolution s = solve_radial_dirichlet(big);
    CHECK_FALSE(compare_with_barrier(s, radial_barrier(2, DecaySpec::sech(1, 1), 0.0)).below);
    CHECK(compare_with_radial_barrier(problem(2, 3.0, 0.0, RadialSource::radial_decay(DecaySpec::zero(), 1)), 0.0).below);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(problem(2, -1.0, 0.0, RadialSource::constant(1.0)).validate(), Error);
    CHECK_THROWS_AS(problem(1, 1.0, 0.0, RadialSource::constant(1.0)).validate(), Error);
    CHECK_THROWS_AS(RadialSource::radial_decay(DecaySpec::sech(1, 1), 2), Error);
    CHECK_THROWS_AS(integrate_radial(problem(2, 1.0, 0.0, RadialSource::constant(1.0)), NAN), Error);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "scherk/errors.hpp"
#include "scherk/shooting.hpp"

using namespace scherk;

namespace {

PsiEnvelope zero_env(int n) { return PsiEnvelope(DecaySpec::zero(), HeightSpec::zero(), 0.0, n); }

ShootingConfig cfg_at(const PsiEnvelope& env, double d0) {
    SolverOptions o;
    o.d0 = d0;
    return make_config(env, o);
}

// sqrt(sech|d - 0.7| sech t), n = 2, h = 0 with the default anchor
constexpr double kGamma0Baseline = -0.64219543485655395;
// sqrt(sech|d| sech t), n = 3, c = 2
constexpr double kHeightBaseline = 2.6919747560757172;

}  // namespace

TEST_CASE("right side of the (w, g) system") {
    PsiEnvelope z = zero_env(2);
    Derivs a = rhs(z, {1.0, 0.0, 0.0}, 2);
    CHECK(a.dw == 0.0);
    CHECK(a.dg == 0.0);
    Derivs b = rhs(z, {1.0, 0.0, -0.5}, 2);
    CHECK(b.dw == doctest::Approx(-0.5 / std::sqrt(0.75)).epsilon(1e-15));
    CHECK(b.dw == doctest::Approx(-0.577350).epsilon(1e-6));
    CHECK(b.dg == doctest::Approx(0.380797).epsilon(1e-6));
    CHECK_THROWS_AS(rhs(z, {1.0, 0.0, -1.0}, 2), Error);
}

TEST_CASE("forward trajectory with psi = 0 follows the linear closed form") {
    for (int n : {2, 3, 5}) {
        PsiEnvelope z = zero_env(n);
        ShootingConfig c = cfg_at(z, 1.0);
        Trajectory t = integrate(z, c, 0.0, 0.5, Direction::ForwardToHorizon);
        CHECK(t.end.kind == Outcome::ReachedHorizon);
        double k = n - 1.0;
        for (const OdeState& s : t.samples)
            CHECK(std::abs(s.g - 0.5 * std::pow(std::cosh(1.0) / std::cosh(s.d), k)) < 1e-9);
        CHECK(std::abs(t.samples.back().g) < 1e-8);
    }
}

TEST_CASE("anchor choice") {
    CHECK(choose_d0(zero_env(2), 2, 0.01) == doctest::Approx(std::atanh(0.02)).epsilon(1e-9));
    CHECK(choose_d0(zero_env(2), 2, 0.01) == doctest::Approx(0.020003).epsilon(1e-5));
    PsiEnvelope e(DecaySpec::sech(1, 1), HeightSpec::sech(1, 1), 0.7, 2);
    double d0 = choose_d0(e, 2, 0.01);
    CHECK(d0 > 0.7);
    CHECK(0.5 * std::tanh(d0) - psi_eval(e, d0, 0.0) >= 0.01 - 1e-9);
    ShootingConfig bad = cfg_at(e, 3.0);
    bad.d0 = 0.5;
    CHECK_THROWS_AS(bad.validate(e), Error);
}

TEST_CASE("membership of A") {
    PsiEnvelope e(DecaySpec::sech(1, 1), HeightSpec::sech(1, 1), 0.7, 2);
    ShootingConfig c = make_config(e, SolverOptions{});
    CHECK(classify_gamma(e, c, 0.0, 0.0) == Membership::InA);
    CHECK(classify_gamma(e, c, 0.0, -1.0 + 1e-12) == Membership::NotInA);
    for (int n : {2, 3}) {
        PsiEnvelope z = zero_env(n);
        ShootingConfig cz = cfg_at(z, 1.0);
        double G = -std::pow(std::cosh(1.0), 1.0 - n);
        CHECK(classify_gamma(z, cz, 0.0, G + 1e-6) == Membership::InA);
        CHECK(classify_gamma(z, cz, 0.0, G - 1e-6) == Membership::NotInA);
    }
}

TEST_CASE("gamma0 closed forms") {
    PsiEnvelope z2 = zero_env(2), z3 = zero_env(3);
    Gamma0Result a = find_gamma0(z2, cfg_at(z2, 1.0), 0.0);
    CHECK(std::abs(a.gamma0 + 1.0 / std::cosh(1.0)) < 1e-10);
    CHECK(a.gamma0 == doctest::Approx(-0.6480543).epsilon(1e-7));
    CHECK(a.bracket_width <= 1e-12);
    Gamma0Result b = find_gamma0(z3, cfg_at(z3, 1.0), 0.0);
    CHECK(b.gamma0 == doctest::Approx(-0.4199743).epsilon(1e-7));
    CHECK(classify(a.trajectory_below) == Membership::NotInA);
    CHECK(classify(a.trajectory_above) == Membership::InA);
}

TEST_CASE("gamma0 regression and refinement") {
    PsiEnvelope e(DecaySpec::sech(1, 1), HeightSpec::sech(1, 1), 0.7, 2);
    ShootingConfig c = make_config(e, SolverOptions{});
    Gamma0Result g = find_gamma0(e, c, 0.0);
    CHECK(g.gamma0 == doctest::Approx(kGamma0Baseline).epsilon(1e-12));
    ShootingConfig fine = c;
    fine.rk_tol = 1e-13;
    CHECK(std::abs(find_gamma0(e, fine, 0.0).gamma0 - g.gamma0) <= 10 * c.bisect_tol);
    CHECK(g.gamma0 > -1.0);
    CHECK(g.gamma0 < 0.0);
    for (const OdeState& s : g.witness().samples) CHECK(s.g < 0.0);
}

TEST_CASE("rho and its tail") {
    PsiEnvelope z = zero_env(2);
    ShootingConfig cz = cfg_at(z, 1.0);
    for (double d : {1.0, 3.0, 20.0}) CHECK(rho_eval(z, cz, d) == 0.0);
    PsiEnvelope e(DecaySpec::sech(1, 1), HeightSpec::sech(1, 1), 0.0, 3);
    ShootingConfig c = make_config(e, SolverOptions{});
    CHECK(rho_eval(e, c, 25.0) < 1e-4);
    CHECK(rho_eval(e, c, 25.0) < rho_eval(e, c, 10.0));

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(0, 1);
    for (int i = 0; i < 20; ++i) {
        PsiEnvelope r(DecaySpec::sech(0.3 + U(rng), 0.5 + U(rng)), HeightSpec::gauss(0.3 + U(rng), 0.2 + U(rng)),
                      4 * U(rng) - 2, 2 + i % 3);
        ShootingConfig rc = make_config(r, SolverOptions{});
        double d1 = rc.d0 + 3 * U(rng), d2 = d1 + 10;
        double sum = 0;
        const int N = 2000;
        for (int j = 0; j < N; ++j) sum += rho_eval(r, rc, d1 + (j + 0.5) * (d2 - d1) / N) * (d2 - d1) / N;
        CHECK(rho_tail_bound(r, rc, d1, d2) >= sum * (1 - 1e-4));
    }
}

TEST_CASE("ell, sigma and solve_height for psi = 0") {
    PsiEnvelope z = zero_env(2);
    ShootingConfig c = cfg_at(z, 1.0);
    const double lt = std::log(std::tanh(0.5));
    EllResult e = ell(z, c, 0.0);
    CHECK(std::abs(e.value - lt) < 1e-8);
    CHECK(e.tail < 1e-6);

    // C1 = 1/sqrt(1 - beta^2) with beta = 1/cosh 1, C0 = 2 cosh(1) C1, sigma = C0 / cosh 1
    SigmaResult s = sigma_bound(z, c);
    double beta = 1.0 / std::cosh(1.0), C1 = 1.0 / std::sqrt(1.0 - beta * beta);
    CHECK(s.C1 == doctest::Approx(C1).epsilon(1e-9));
    CHECK(s.sigma == doctest::Approx(2.0 * C1).epsilon(1e-9));
    for (double h : {-5.0, 0.0, 5.0}) CHECK(std::abs(ell(z, c, h).value - h) <= s.sigma);
    CHECK(sigma_bound(z, cfg_at(z, 2.0)).sigma < sigma_bound(z, cfg_at(z, 1.0)).sigma);

    HeightSolve hs = solve_height(z, c, 0.0);
    CHECK(std::abs(hs.h_c + lt) < 1e-6);
    CHECK(std::abs(hs.ell_value) <= std::max(1e-6, 2 * hs.tail));
}

TEST_CASE("solve_height regression and refinement") {
    PsiEnvelope e(DecaySpec::sech(1, 1), HeightSpec::sech(1, 1), 0.0, 3);
    ShootingConfig c = make_config(e, SolverOptions{});
    HeightSolve hs = solve_height(e, c, 2.0);
    CHECK(hs.h_c == doctest::Approx(kHeightBaseline).epsilon(1e-9));
    CHECK(std::abs(hs.ell_value - 2.0) <= std::max(1e-6, 2 * hs.tail));
    ShootingConfig fine = c;
    fine.rk_tol = 1e-12;
    fine.d_max = 40;
    CHECK(std::abs(solve_height(e, fine, 2.0).h_c - hs.h_c) < 1e-5);
}

TEST_CASE("ell is increasing in h on a grid") {
    PsiEnvelope e(DecaySpec::sech(0.8, 1), HeightSpec::gauss(1.2, 0.5), -0.5, 2);
    ShootingConfig c = make_config(e, SolverOptions{});
    double prev = -1e300;
    for (double h = -4; h <= 4; h += 1) {
        double v = ell(e, c, h).value;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("integral-form residuals") {
    PsiEnvelope z = zero_env(3);
    ShootingConfig cz = cfg_at(z, 1.0);
    Trajectory tz = integrate(z, cz, 0.2, 0.4, Direction::ForwardToHorizon);
    Residuals rz = residual_integral_forms(z, cz, tz);
    CHECK(rz.max_w < 1e-8);
    CHECK(rz.max_g < 1e-8);

    PsiEnvelope e(DecaySpec::sech(1, 1), HeightSpec::sech(1, 1), 0.0, 3);
    ShootingConfig c = make_config(e, SolverOptions{});
    Gamma0Result g = find_gamma0(e, c, 0.5);
    Residuals rw = residual_integral_forms(e, c, g.witness());
    CHECK(rw.max_w < 1e-6);
    CHECK(rw.max_g < 1e-6);

    // forward runs: residuals shrink with rk_tol, monotone within a factor 2
    double prev_w = 1e300, prev_g = 1e300;
    for (double tol : {1e-8, 1e-9, 1e-10, 1e-11, 1e-12}) {
        ShootingConfig ct = c;
        ct.rk_tol = tol;
        Residuals r = residual_integral_forms(e, ct, integrate(e, ct, 0.5, 0.3, Direction::ForwardToHorizon));
        CHECK(r.max_w <= 2 * prev_w);
        CHECK(r.max_g <= 2 * prev_g);
        prev_w = r.max_w;
        prev_g = r.max_g;
    }
    CHECK(prev_w < 1e-11);
}

TEST_CASE("bounds on g along forward runs") {
    PsiEnvelope e(DecaySpec::inverse_power(1.2, 5), HeightSpec::sech(1.5, 0.7), 1.0, 3);
    ShootingConfig c = make_config(e, SolverOptions{});
    for (double gamma : {-0.9, -0.3, 0.0, 0.4, 0.9}) {
        Trajectory t = integrate(e, c, 0.3, gamma, Direction::ForwardToHorizon);
        double prev_q = 1e300;
        bool negative = false;
        for (const OdeState& s : t.samples) {
            if (s.d <= c.d0) continue;
            CHECK(s.g > std::min(-0.5, gamma));
            CHECK(s.g <= std::max(0.0, gamma) + 1e-12);
            if (s.g < 0) negative = true;
            if (negative) CHECK(s.g < 0);
            double q = std::pow(std::cosh(s.d), 2) * s.g;
            CHECK(q <= prev_q + 1e-8 * std::max(1.0, std::abs(prev_q)) + 1e-10 * std::pow(std::cosh(s.d), 2));
            prev_q = q;
        }
    }
}

TEST_CASE("configuration validation") {
    SolverOptions o;
    o.rk_tol = -1;
    CHECK_THROWS_AS(o.validate(), Error);
    o = SolverOptions{};
    o.d0 = -1;
    CHECK_THROWS_AS(o.validate(), Error);
    PsiEnvelope z = zero_env(2);
    ShootingConfig c = cfg_at(z, 1.0);
    CHECK_THROWS_AS(integrate(z, c, 0.0, 1.0, Direction::ForwardToHorizon), Error);
    CHECK_THROWS_AS(integrate(z, c, NAN, 0.0, Direction::ForwardToHorizon), Error);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "scherk/envelope.hpp"
#include "scherk/errors.hpp"
#include "scherk/quadrature.hpp"

using namespace scherk;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

PsiEnvelope sech_env(double a = 1, double b = 1, double c0 = 1, double hb = 1, double offset = 0, int n = 2) {
    return PsiEnvelope(DecaySpec::sech(a, b), HeightSpec::sech(c0, hb), offset, n);
}

}  // namespace

TEST_CASE("psi values") {
    PsiEnvelope e = sech_env();
    CHECK(psi_eval(e, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(psi_eval(e, 1.0, -3.0) == doctest::Approx(0.805019).epsilon(1e-6));
    CHECK(psi_eval(e, 1.0, -3.0) == doctest::Approx(std::sqrt(sech(1.0))).epsilon(1e-15));
    CHECK(psi_eval(e, -2.0, 1.5) == doctest::Approx(std::sqrt(sech(2.0) * sech(1.5))).epsilon(1e-14));

    PsiEnvelope z(DecaySpec::zero(), HeightSpec::sech(1, 1), 0.3, 3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-20, 20);
    for (int i = 0; i < 50; ++i) CHECK(psi_eval(z, U(rng), U(rng)) == 0.0);
}

TEST_CASE("psi partials") {
    PsiEnvelope e = sech_env();
    for (double t : {-5.0, -0.1}) CHECK(psi_partials(e, 0.7, t).dt == 0.0);
    CHECK(psi_partials(e, 0.0, 1.0).dd == doctest::Approx(0.0).scale(1.0));
    PsiEnvelope shifted = sech_env(2, 0.5, 1, 1, 0.7);
    CHECK(std::abs(psi_partials(shifted, 0.7, 0.3).dd) < 1e-15);

    const double eta = 1e-5;
    auto fd_check = [&](const PsiEnvelope& env, double d, double t) {
        PsiPartials p = psi_partials(env, d, t);
        double fd = (psi_eval(env, d + eta, t) - psi_eval(env, d - eta, t)) / (2 * eta);
        double ft = (psi_eval(env, d, t + eta) - psi_eval(env, d, t - eta)) / (2 * eta);
        CHECK(std::abs(p.dd - fd) < 1e-6);
        CHECK(std::abs(p.dt - ft) < 1e-6);
    };
    fd_check(e, 1.0, 1.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.05, 5.0);
    for (int i = 0; i < 40; ++i) {
        PsiEnvelope g(DecaySpec::inverse_power(1.3, 5.0), HeightSpec::gauss(0.8, 0.4), -0.4, 3);
        fd_check(g, -0.4 + (i % 2 ? 1 : -1) * U(rng), U(rng));
        fd_check(sech_env(0.9, 1.7, 1.2, 0.6, 0.25), 0.25 + (i % 2 ? 1 : -1) * U(rng), U(rng));
    }
}

TEST_CASE("psi sup and critical distance") {
    CHECK(psi_sup(sech_env()) == doctest::Approx(1.0));
    CHECK(d_tilde(sech_env()) == 0.0);
    PsiEnvelope e = sech_env(4, 1, 1, 1, 0.7);
    CHECK(psi_sup(e) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d_tilde(e) == 0.7);
    CHECK(psi_sup(PsiEnvelope(DecaySpec::zero(), HeightSpec::gauss(1, 1), 0, 2)) == 0.0);
}

TEST_CASE("tail integral bounds the quadrature") {
    CHECK(psi_tail_integral(PsiEnvelope(DecaySpec::zero(), HeightSpec::sech(1, 1), 0, 2), 0.0, 0.0) == 0.0);

    // independent value: integral of sqrt(sech s) on [0, 60] plus the tail bound 2 sqrt(2) e^{-30}
    auto f = [](double s) { return std::sqrt(sech(s)); };
    double ref = integrate(f, 0.0, 60.0, 1e-14).value;
    CHECK(ref == doctest::Approx(2.62206).epsilon(1e-5));
    double I = psi_tail_integral(sech_env(), 0.0, 0.0);
    CHECK(I >= ref);
    CHECK(I == doctest::Approx(ref).epsilon(1e-8));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0, 1);
    for (int i = 0; i < 50; ++i) {
        DecaySpec phi = i % 2 ? DecaySpec::sech(0.2 + U(rng), 0.3 + 2 * U(rng))
                              : DecaySpec::inverse_power(0.2 + U(rng), 2.5 + 6 * U(rng));
        HeightSpec h = i % 3 ? HeightSpec::sech(0.2 + U(rng), 0.2 + U(rng)) : HeightSpec::gauss(0.2 + U(rng), U(rng) + 0.05);
        PsiEnvelope env(phi, h, 6 * U(rng) - 3, 2 + i % 4);
        double d1 = 4 * U(rng) - 2, t = 3 * U(rng) - 1;
        auto g = [&](double s) { return psi_eval(env, s, t); };
        double q = integrate(g, d1, d1 + 200.0, 1e-12, 16).value;
        CHECK(psi_tail_integral(env, d1, t) >= q * (1 - 1e-12));
    }
}

TEST_CASE("coth bound check") {
    for (int n : {2, 3, 5}) CHECK(check_coth_global_bound(DecaySpec::sech(n - 1.0, 1.0), n));
    CHECK_FALSE(check_coth_global_bound(DecaySpec::sech(10.0, 0.01), 2));
    CHECK(DecaySpec::sech(10.0, 0.01)(1.0) == doctest::Approx(9.9995).epsilon(1e-5));
    CHECK(check_coth_global_bound(DecaySpec::zero(), 2));
}

TEST_CASE("psi monotone in t and unimodal in d") {
    PsiEnvelope e(DecaySpec::inverse_power(1.0, 4.0), HeightSpec::gauss(1.5, 0.3), 1.1, 3);
    for (double d = -8; d <= 10; d += 0.37) {
        double prev = psi_eval(e, d, 0.0);
        for (double t = -4; t < 0; t += 0.5) CHECK(psi_eval(e, d, t) == prev);
        for (double t = 0.1; t < 10; t += 0.1) {
            double v = psi_eval(e, d, t);
            CHECK(v <= prev);
            prev = v;
        }
    }
    for (double t : {0.0, 1.0, 4.0}) {
        for (double d = -8; d + 0.1 <= 1.1; d += 0.1) CHECK(psi_eval(e, d, t) <= psi_eval(e, d + 0.1, t) + 1e-16);
        for (double d = 1.1; d < 10; d += 0.1) CHECK(psi_eval(e, d, t) >= psi_eval(e, d + 0.1, t));
    }
}

TEST_CASE("decay at d, t = 20 and 40") {
    PsiEnvelope e = sech_env(1, 1, 1, 1, 0.5);
    for (double s : {20.0, 40.0}) {
        CHECK(psi_eval(e, 0.5 + s, 0.0) <= std::sqrt(2 * std::exp(-s)));
        CHECK(psi_eval(e, 0.5 - s, 0.0) <= std::sqrt(2 * std::exp(-s)));
        CHECK(psi_eval(e, 0.5, s) <= std::sqrt(2 * std::exp(-s)));
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(DecaySpec::sech(-1, 1), Error);
    CHECK_THROWS_AS(DecaySpec::inverse_power(1, 1.5), Error);
    CHECK_THROWS_AS(HeightSpec::gauss(1, 0), Error);
    CHECK_THROWS_AS(PsiEnvelope(DecaySpec::zero(), HeightSpec::zero(), 0, 1), Error);
    CHECK(DecaySpec::sech(2, 1).tail(0) >= integrate([](double r) { return 2 * sech(r); }, 0, 80).value);
    CHECK(std::isinf(DecaySpec::inverse_power_unchecked(1, 1).tail(0)));
}

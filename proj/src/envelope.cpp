#include "scherk/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scherk/errors.hpp"
#include "scherk/quadrature.hpp"

namespace scherk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sech without overflow for large arguments
double sech(double x) {
    x = std::abs(x);
    double e = std::exp(-x);
    return 2.0 * e / (1.0 + e * e);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

// ---------------------------------------------------------------- DecaySpec

DecaySpec DecaySpec::sech(double a, double b) {
    DecaySpec s{Family::Sech, a, b, 0.0};
    s.validate();
    return s;
}

DecaySpec DecaySpec::inverse_power(double a, double p) {
    DecaySpec s = inverse_power_unchecked(a, p);
    s.validate();
    return s;
}

DecaySpec DecaySpec::inverse_power_unchecked(double a, double p) { return DecaySpec{Family::InversePower, a, 0.0, p}; }

double DecaySpec::operator()(double r) const {
    r = std::abs(r);
    switch (family) {
        case Family::Zero: return 0.0;
        case Family::Sech: return a * scherk::sech(b * r);
        case Family::InversePower: return a * std::pow(1.0 + r * r, -0.5 * p);
    }
    return 0.0;
}

double DecaySpec::log_derivative(double r) const {
    switch (family) {
        case Family::Zero: return 0.0;
        case Family::Sech: return -b * std::tanh(b * r);
        case Family::InversePower: return -p * r / (1.0 + r * r);
    }
    return 0.0;
}

double DecaySpec::derivative(double r) const { return (*this)(r) * log_derivative(r); }

double DecaySpec::sqrt_tail(double R) const {
    R = std::max(R, 0.0);
    switch (family) {
        case Family::Zero: return 0.0;
        case Family::Sech:
            // sech x <= 2 e^{-x}
            return std::sqrt(2.0 * a) * (2.0 / b) * std::exp(-0.5 * b * R);
        case Family::InversePower: {
            double q = 0.5 * p - 1.0;
            if (R >= 1.0) return std::sqrt(a) * std::pow(R, -q) / q;
            return std::sqrt(a) * ((1.0 - R) + 1.0 / q);
        }
    }
    return 0.0;
}

double DecaySpec::tail(double R) const {
    R = std::max(R, 0.0);
    switch (family) {
        case Family::Zero: return 0.0;
        case Family::Sech: return (2.0 * a / b) * std::atan(std::exp(-b * R));
        case Family::InversePower: {
            if (p <= 1.0) return kInf;
            if (R >= 1.0) return a * std::pow(R, 1.0 - p) / (p - 1.0);
            return a * ((1.0 - R) + 1.0 / (p - 1.0));
        }
    }
    return 0.0;
}

double DecaySpec::level_radius(double y) const {
    if (family == Family::Zero || y >= a) return 0.0;
    require(y > 0.0, "level_radius needs a positive level");
    switch (family) {
        case Family::Sech: return std::acosh(a / y) / b;
        case Family::InversePower: return std::sqrt(std::max(0.0, std::pow(a / y, 2.0 / p) - 1.0));
        default: return 0.0;
    }
}

void DecaySpec::validate() const {
    switch (family) {
        case Family::Zero: return;
        case Family::Sech:
            require(positive_finite(a) && positive_finite(b), "sech decay needs a > 0 and b > 0");
            break;
        case Family::InversePower:
            require(positive_finite(a) && std::isfinite(p), "inverse_power decay needs a > 0 and finite p");
            require(p > 2.0, "inverse_power decay needs p > 2 so that sqrt(phi) is integrable");
            break;
    }
    require(derivative(0.0) == 0.0, "decay profile must satisfy phi'(0) = 0");
    double R = std::max(50.0, 2.0 * level_radius(1e-12 * a));
    if (!std::isfinite(R)) R = 50.0;
    double prev = (*this)(0.0);
    for (int i = 1; i <= 1000; ++i) {
        double v = (*this)(R * i / 1000.0);
        require(std::isfinite(v) && v >= 0.0 && v <= prev, "decay profile must be nonincreasing and nonnegative");
        prev = v;
    }
    require(std::isfinite(sqrt_tail(0.0)), "sqrt(phi) must be integrable");
}

// ---------------------------------------------------------------- HeightSpec

HeightSpec HeightSpec::sech(double c0, double b) {
    HeightSpec s{Family::Sech, c0, b};
    s.validate();
    return s;
}

HeightSpec HeightSpec::gauss(double c0, double b) {
    HeightSpec s{Family::Gauss, c0, b};
    s.validate();
    return s;
}

double HeightSpec::operator()(double t) const {
    switch (family) {
        case Family::Zero: return 0.0;
        case Family::Sech: return c0 * scherk::sech(b * t);
        case Family::Gauss: return c0 * std::exp(-b * t * t);
    }
    return 0.0;
}

double HeightSpec::log_derivative(double t) const {
    switch (family) {
        case Family::Zero: return 0.0;
        case Family::Sech: return -b * std::tanh(b * t);
        case Family::Gauss: return -2.0 * b * t;
    }
    return 0.0;
}

double HeightSpec::level_time(double y) const {
    if (family == Family::Zero || y >= c0) return 0.0;
    require(y > 0.0, "level_time needs a positive level");
    switch (family) {
        case Family::Sech: return std::acosh(c0 / y) / b;
        case Family::Gauss: return std::sqrt(std::log(c0 / y) / b);
        default: return 0.0;
    }
}

void HeightSpec::validate() const {
    if (family == Family::Zero) return;
    require(positive_finite(c0) && positive_finite(b), "height profile needs c0 > 0 and b > 0");
    // even by construction; check decay and monotonicity on a grid
    double T = 2.0 * level_time(1e-12 * c0);
    double prev = (*this)(0.0);
    for (int i = 1; i <= 1000; ++i) {
        double v = (*this)(T * i / 1000.0);
        require(v <= prev && v >= 0.0, "height profile must be decreasing on [0, inf)");
        prev = v;
    }
    require((*this)(T) <= 1e-12 * c0 * 1.0000001, "height profile must decay to 0");
}

// ---------------------------------------------------------------- PsiEnvelope

PsiEnvelope::PsiEnvelope(DecaySpec phi_, HeightSpec h_, double offset_, int n_)
    : phi(phi_), h(h_), offset(offset_), n(n_) {
    validate();
}

PsiEnvelope PsiEnvelope::with_offset(double delta) const {
    PsiEnvelope e = *this;
    e.offset = delta;
    require(std::isfinite(delta), "envelope offset must be finite");
    return e;
}

PsiEnvelope PsiEnvelope::frozen() const {
    PsiEnvelope e = *this;
    e.frozen_height = true;
    return e;
}

void PsiEnvelope::validate() const {
    require(n >= 2 && n <= 64, "dimension n must be >= 2, got " + std::to_string(n));
    require(std::isfinite(offset), "envelope offset must be finite");
    phi.validate();
    h.validate();
}

double psi_eval(const PsiEnvelope& env, double d, double t) {
    if (env.is_zero()) return 0.0;
    double te = env.frozen_height ? 0.0 : std::max(t, 0.0);
    return std::sqrt(env.phi(d - env.offset) * env.h(te));
}

PsiPartials psi_partials(const PsiEnvelope& env, double d, double t) {
    if (env.is_zero()) return {0.0, 0.0};
    double z = d - env.offset;
    double psi = psi_eval(env, d, t);
    double sgn = z > 0.0 ? 1.0 : (z < 0.0 ? -1.0 : 0.0);
    double dd = 0.5 * psi * env.phi.log_derivative(std::abs(z)) * sgn;
    double dt = (env.frozen_height || t <= 0.0) ? 0.0 : 0.5 * psi * env.h.log_derivative(t);
    return {dd, dt};
}

double psi_sup(const PsiEnvelope& env) {
    if (env.is_zero()) return 0.0;
    return std::sqrt(env.phi(0.0) * env.h(0.0));
}

double d_tilde(const PsiEnvelope& env) { return env.offset; }

namespace {

// Upper bound on the integral of sqrt(phi) over [lo, inf), lo >= 0.
double sqrt_phi_upper(const DecaySpec& phi, double lo) {
    double cut = std::min(phi.level_radius(1e-32 * phi.a), 1e4);
    if (lo >= cut) return phi.sqrt_tail(lo);
    auto f = [&](double u) { return std::sqrt(phi(u)); };
    QuadResult q = integrate(f, lo, cut, 1e-13);
    return (q.value + q.error) * (1.0 + 1e-12) + phi.sqrt_tail(cut);
}

}  // namespace

double psi_tail_integral(const PsiEnvelope& env, double d1, double t) {
    if (env.is_zero()) return 0.0;
    double te = env.frozen_height ? 0.0 : std::max(t, 0.0);
    double ht = env.h(te);
    if (ht == 0.0) return 0.0;
    double z = d1 - env.offset;
    double J;
    if (z >= 0.0) {
        J = sqrt_phi_upper(env.phi, z);
    } else {
        auto f = [&](double u) { return std::sqrt(env.phi(u)); };
        QuadResult q = integrate(f, 0.0, -z, 1e-13);
        J = (q.value + q.error) * (1.0 + 1e-12) + sqrt_phi_upper(env.phi, 0.0);
    }
    return std::sqrt(ht) * J;
}

double psi_integral(const PsiEnvelope& env, double d1, double d2) {
    if (env.is_zero() || d2 <= d1) return 0.0;
    auto f = [&](double s) { return psi_eval(env, s, 0.0); };
    double s0 = env.offset;
    if (s0 > d1 && s0 < d2) return integrate(f, d1, s0).value + integrate(f, s0, d2).value;
    return integrate(f, d1, d2).value;
}

namespace {

enum class Cert { Holds, Violated, Unknown };

// phi nonincreasing, coth decreasing: phi(lo) <= k coth(hi) certifies [lo, hi].
Cert certify(const DecaySpec& phi, double k, double lo, double hi, int depth) {
    double plo = phi(lo);
    if (plo <= k / std::tanh(hi)) return Cert::Holds;
    if (lo > 0.0 && plo > k / std::tanh(lo)) return Cert::Violated;
    if (phi(hi) > k / std::tanh(hi)) return Cert::Violated;
    if (depth == 0) return Cert::Unknown;
    double mid = 0.5 * (lo + hi);
    Cert a = certify(phi, k, lo, mid, depth - 1);
    if (a == Cert::Violated) return a;
    Cert b = certify(phi, k, mid, hi, depth - 1);
    if (b == Cert::Violated) return b;
    return (a == Cert::Holds && b == Cert::Holds) ? Cert::Holds : Cert::Unknown;
}

}  // namespace

bool check_coth_global_bound(const DecaySpec& spec, int n) {
    require(n >= 2, "dimension n must be >= 2");
    if (spec.is_zero()) return true;
    double k = n - 1.0;
    // beyond r_tail, phi <= n-1 < (n-1) coth r
    double r_tail = spec.level_radius(k);
    if (r_tail <= 0.0) return true;
    const int cells = 1000;
    for (int i = 0; i < cells; ++i) {
        double lo = r_tail * i / cells, hi = r_tail * (i + 1) / cells;
        // Unknown after refinement means a tangency at rounding level; counted as holding
        if (certify(spec, k, lo, hi, 30) == Cert::Violated) return false;
    }
    return true;
}

}  // namespace scherk

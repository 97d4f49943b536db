#pragma once

// Decay profile phi, height profile h and the majorant psi(d, t).

namespace scherk {

/// phi(r): a*sech(b r), a*(1+r^2)^(-p/2) with p > 2, or identically zero.
struct DecaySpec {
    enum class Family { Zero, Sech, InversePower };

    Family family = Family::Zero;
    double a = 0.0;
    double b = 0.0;  // Sech rate
    double p = 0.0;  // InversePower exponent

    static DecaySpec zero() { return {}; }
    static DecaySpec sech(double a, double b);
    static DecaySpec inverse_power(double a, double p);
    /// Skips validation; used to build negative controls.
    static DecaySpec inverse_power_unchecked(double a, double p);

    bool is_zero() const noexcept { return family == Family::Zero; }
    double operator()(double r) const;
    double derivative(double r) const;
    /// phi'(r)/phi(r), finite even where phi underflows.
    double log_derivative(double r) const;

    /// Upper bound on the integral of sqrt(phi) over [R, inf), R >= 0.
    double sqrt_tail(double R) const;
    /// Upper bound on the integral of phi over [R, inf); +inf when it diverges.
    double tail(double R) const;
    /// Smallest r >= 0 with phi(r) <= y (0 if phi(0) <= y).
    double level_radius(double y) const;

    /// Throws Validation unless phi is nonincreasing on a 10^3 grid with phi'(0) = 0
    /// and the sqrt-integral converges.
    void validate() const;
};

/// h(t): c0*sech(b t), c0*exp(-b t^2), or identically zero.
struct HeightSpec {
    enum class Family { Zero, Sech, Gauss };

    Family family = Family::Zero;
    double c0 = 0.0;
    double b = 0.0;

    static HeightSpec zero() { return {}; }
    static HeightSpec sech(double c0, double b);
    static HeightSpec gauss(double c0, double b);

    bool is_zero() const noexcept { return family == Family::Zero; }
    double operator()(double t) const;
    double log_derivative(double t) const;
    /// Smallest t >= 0 with h(t) <= y.
    double level_time(double y) const;

    void validate() const;
};

struct PsiEnvelope {
    DecaySpec phi;
    HeightSpec h;
    double offset = 0.0;  // d_S(o)
    int n = 2;
    /// When set, psi(d, t) = psi(d, 0) for every t; a w-independent majorant.
    bool frozen_height = false;

    PsiEnvelope() = default;
    PsiEnvelope(DecaySpec phi_, HeightSpec h_, double offset_, int n_);

    bool is_zero() const noexcept { return phi.is_zero() || h.is_zero(); }
    PsiEnvelope with_offset(double delta) const;
    PsiEnvelope frozen() const;
    void validate() const;
};

struct PsiPartials {
    double dd;
    double dt;
};

double psi_eval(const PsiEnvelope& env, double d, double t);
PsiPartials psi_partials(const PsiEnvelope& env, double d, double t);
double psi_sup(const PsiEnvelope& env);
double d_tilde(const PsiEnvelope& env);

/// Upper bound on the integral of psi(s, t) over [d1, inf).
double psi_tail_integral(const PsiEnvelope& env, double d1, double t);

/// Integral of psi(s, 0) over [d1, d2] by quadrature (no tail padding).
double psi_integral(const PsiEnvelope& env, double d1, double d2);

/// True iff phi(r) <= (n-1) coth r for every r > 0.
bool check_coth_global_bound(const DecaySpec& spec, int n);

}  // namespace scherk

#pragma once

// Scherk-type barriers attached to geodesic walls, radial barriers, and the
// uniform-bound experiment.

#include <vector>

#include "scherk/envelope.hpp"
#include "scherk/hgeom.hpp"
#include "scherk/shooting.hpp"

namespace scherk {

/// Minimal Scherk graph through (d0, h): G(d) = -cosh^{1-n}(d) and W with W(d0) = h.
class ExplicitScherk {
public:
    ExplicitScherk(int n, double d0, double h);

    double G(double d) const;
    double W(double d) const;
    /// W(d) ~ -rate * ln d as d -> 0+.
    double divergence_rate() const;

    int n() const noexcept { return n_; }
    double d0() const noexcept { return d0_; }
    double h() const noexcept { return h_; }

private:
    int n_;
    double d0_, h_;
};

ExplicitScherk explicit_scherk(int n, double d0, double h);

/// Integral of 1/sqrt(cosh^{2n-2}(t) - 1) over [a, b], 0 < a <= b (b may be +inf).
double scherk_integral(int n, double a, double b);

/// Scherk lower bound with W(+inf) = c: c + integral_d^inf 1/sqrt(cosh^{2n-2} - 1).
double scherk_lower_bound(int n, double c, double d);

/// Monotone piecewise-cubic interpolant (Fritsch-Carlson limited Hermite).
class MonotoneProfile {
public:
    MonotoneProfile() = default;
    /// x strictly increasing; y monotone; slopes are the exact derivatives at the nodes.
    MonotoneProfile(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);

    double operator()(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    const std::vector<double>& x() const noexcept { return x_; }
    const std::vector<double>& y() const noexcept { return y_; }
    /// Per-segment bound |y_{i+1} - y_i| <= spacing * max|y'| on the interpolation error.
    const std::vector<double>& segment_error() const noexcept { return err_; }
    /// Error bound of the segment containing x.
    double error_at(double x) const;

private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, m_, err_;
};

struct EnvelopeContext {
    DecaySpec phi;
    HeightSpec h;
    int n = 2;
    SolverOptions solver;

    PsiEnvelope envelope(double offset) const { return PsiEnvelope(phi, h, offset, n); }
};

enum class BarrierKind { Super, Sub };

const char* to_string(BarrierKind k) noexcept;

struct ScherkBarrier {
    GeodesicWall wall;
    double c;
    BarrierKind kind;
    int n;
    PsiEnvelope env;  // offset = d_S(o)
    ShootingConfig cfg;
    MonotoneProfile profile;  // values as evaluated (already reflected for Sub)
    std::vector<OdeState> samples;  // super-problem samples, increasing d
    double d_min;
    double d_max;
    double d0;
    double h_c;  // super-problem height at d0
    double gamma0;
    double ell_value;
    double tail;
    double sigma;

    double sign() const noexcept { return kind == BarrierKind::Super ? 1.0 : -1.0; }
    /// Profile value at signed distance d; throws TooCloseToWall below d_min.
    double at(double d) const;
};

ScherkBarrier build_super(const EnvelopeContext& ctx, const GeodesicWall& wall, double c);
/// -(super barrier for -c) over the t-frozen envelope, which dominates psi(d, -t).
ScherkBarrier build_sub(const EnvelopeContext& ctx, const GeodesicWall& wall, double c);

double eval_barrier(const ScherkBarrier& b, const BallPoint& x);

/// Piecewise min (Super) or max (Sub) of two barriers whose walls satisfy S1 in B2, S2 in B1.
double envelope_barrier(const ScherkBarrier& b1, const ScherkBarrier& b2, const BallPoint& x);

/// Throws ConfigurationError unless sampled points of each wall lie on the other's positive side.
void check_wall_arrangement(const GeodesicWall& s1, const GeodesicWall& s2);

/// Points on the wall within hyperbolic radius R of its point closest to the origin.
std::vector<BallPoint> sample_wall(const GeodesicWall& S, int count, double R, unsigned long long seed = 7);

struct SupersolutionCheck {
    double margin;        // min over nodes of Q(w) - psi, from differenced g
    double max_residual;  // max |g' + (n-1) tanh(d) g + psi|
    double d_from;        // residual window [d_from, d_max]
    std::vector<double> d;
    std::vector<double> residual;
};

/// Finite-difference ODE residual of the stored profile on [2 d_min, d_max].
SupersolutionCheck supersolution_residual(const ScherkBarrier& b);

/// rho~(r) = sinh^{1-n}(r) * integral_0^r phi(s) sinh^{n-1}(s) ds.
double rho_tilde(int n, const DecaySpec& phi, double r);

struct RadialBarrier {
    int n;
    DecaySpec phi;
    double M;
    std::vector<double> r;
    std::vector<double> rho_tilde;
    std::vector<double> v;
    double r_min;   // series expansion below this radius
    double r_max;   // last grid radius
    double tail;    // bound on v(r_max) - M
    double sup_rho;
    MonotoneProfile v_profile;

    double eval(double radius) const;
};

RadialBarrier radial_barrier(int n, const DecaySpec& phi, double M);

/// Smallest t >= 0 with Psi(0, t) <= 2^{-(n+1)}, by bisection.
double c0_threshold(const EnvelopeContext& ctx);

/// Wall with d_S(o) = delta: concentric orthosphere about e1 (hyperplane for delta = 0).
GeodesicWall wall_at_offset(int n, double delta);

struct OffsetSup {
    double offset;
    double sup;  // sup over d >= d1 of w_{S,c}
    double h_c;
    double d0;
};

struct UniformBoundReport {
    double c;
    double c0;
    double d1;
    double M_observed;
    std::vector<OffsetSup> per_offset;

    /// Max of the per-offset sups restricted to |offset| <= bound.
    double max_within(double bound) const;
};

UniformBoundReport uniform_bound_experiment(const EnvelopeContext& ctx, double c, const std::vector<double>& offsets,
                                            double d1);

struct SqueezePoint {
    double t;
    double value;
};

/// Super barrier on wall_concentric_at(p, t0) with constant c + eps, evaluated along the ray toward p.
std::vector<SqueezePoint> squeeze_trace(const EnvelopeContext& ctx, const BoundaryPoint& p, double t0, double c,
                                        double eps, const std::vector<double>& ts);

}  // namespace scherk

#pragma once

// Rotationally symmetric Dirichlet problem on geodesic balls:
//   w' = g / sqrt(1 - g^2),   (sinh^{n-1}(r) g)' = -f(r, w) sinh^{n-1}(r),   g(0) = 0.

#include <optional>
#include <string>
#include <vector>

#include "scherk/barriers.hpp"
#include "scherk/envelope.hpp"

namespace scherk {

/// Right side f(r, t) with f_t <= 0.
///
/// SeparableMonotone uses the monotone part of h on the side selected by sign:
/// +phi(r) h(max(t, 0)) for sign = +1 and -phi(r) h(min(t, 0)) for sign = -1.
struct RadialSource {
    enum class Kind { Constant, RadialDecay, SeparableMonotone };

    Kind kind = Kind::Constant;
    double H = 0.0;
    DecaySpec phi;
    HeightSpec h;
    int sign = 1;

    static RadialSource constant(double H);
    static RadialSource radial_decay(DecaySpec phi, int sign = 1);
    static RadialSource separable(DecaySpec phi, HeightSpec h, int sign = 1);

    double operator()(double r, double t) const;
    bool depends_on_t() const noexcept { return kind == Kind::SeparableMonotone; }
    void validate() const;
};

struct RadialOptions {
    double rk_tol = 1e-10;
    double eps_g = 1e-9;
    double r_eps = 1e-6;
    double solve_tol = 1e-10;
};

struct RadialProblem {
    int n = 2;
    double R = 1.0;
    double c = 0.0;
    RadialSource f;
    RadialOptions opt;

    void validate() const;
};

enum class RadialOutcome { Solved, GradientBlowup };

const char* to_string(RadialOutcome o) noexcept;

struct RadialSample {
    double r;
    double w;
    double g;
};

struct SweepPoint {
    double w0;
    RadialOutcome outcome;
    double end_value;  // w(R) when solved, w at the blowup radius otherwise
    double r_end;
};

struct RadialSolution {
    std::vector<RadialSample> samples;  // r = 0 first
    double center_value = 0.0;
    RadialOutcome outcome = RadialOutcome::Solved;
    double r_star = 0.0;  // blowup radius, meaningful for GradientBlowup
    double w_R = 0.0;     // w at R (Solved) or at the last sample
    long steps = 0;
    std::vector<SweepPoint> sweep;  // filled by solve_radial_dirichlet
    bool monotone_map = true;       // w0 -> w(R) nondecreasing over the sweep
};

/// Integrates from the center value w0; stops at R or where |g| reaches 1 - eps_g.
RadialSolution integrate_radial(const RadialProblem& p, double w0);

/// Shooting on the center value. Throws NoBracket if the sweep cannot bracket c without blowup.
RadialSolution solve_radial_dirichlet(const RadialProblem& p);

/// Closed-form blowup radius 2 artanh(1/H) for n = 2 and constant f = H > 1 (+inf for H <= 1).
double hemisphere_radius(double H);

/// max over samples of |g(r) + integral_0^r f(s, w(s)) (sinh s / sinh r)^{n-1} ds|.
double flux_residual(const RadialProblem& p, const RadialSolution& s);

struct BarrierComparison {
    double max_excess;  // max of w(r) - v(r) over the samples; <= 0 when below the barrier
    double r_worst;
    bool below;
};

BarrierComparison compare_with_barrier(const RadialSolution& s, const RadialBarrier& v, double tol = 1e-8);
/// Solves p (RadialDecay f) and compares with radial_barrier(n, phi, M).
BarrierComparison compare_with_radial_barrier(const RadialProblem& p, double M);

}  // namespace scherk

#pragma once

// Shooting for the (w, g) system
//   w' = g / sqrt(1 - g^2),   g' = -(n-1) tanh(d) g - psi(d, w),
// started at w(d0) = h, g(d0) = gamma.

#include <optional>
#include <utility>
#include <vector>

#include "scherk/envelope.hpp"

namespace scherk {

struct OdeState {
    double d;
    double w;
    double g;
};

struct SolverOptions {
    double rk_tol = 1e-10;
    double eps_g = 1e-9;
    double d_max = 30.0;
    double bisect_tol = 1e-12;
    double margin = 0.01;
    double d0 = 0.0;  // fixed anchor; 0 selects choose_d0

    void validate() const;
};

struct ShootingConfig {
    int n = 2;
    double d0 = 1.0;
    double rk_tol = 1e-10;
    double eps_g = 1e-9;
    double d_max = 30.0;
    double bisect_tol = 1e-12;

    /// Checks the field ranges and the anchor condition (n-1)/2 tanh d0 - psi(d0, 0) > 0, d0 > d~.
    void validate(const PsiEnvelope& env) const;
};

/// Config with d0 = opt.d0, or choose_d0(env, n, opt.margin) when that is 0.
ShootingConfig make_config(const PsiEnvelope& env, const SolverOptions& opt);

enum class Outcome { HitsMinusOne, HitsPlusOne, ReachedZero, ReachedHorizon };
enum class Direction { BackwardToZero, ForwardToHorizon };

const char* to_string(Outcome o) noexcept;

struct Classification {
    Outcome kind;
    double d_stop;  // turning point for Hits*, 0 or d_max otherwise
};

struct Trajectory {
    std::vector<OdeState> samples;  // ordered along the direction of integration
    Classification end;
    Direction direction = Direction::BackwardToZero;
    long steps = 0;
};

struct Derivs {
    double dw;
    double dg;
};

/// Right side of the (w, g) system. Throws NearSingularity when 1 - g^2 < eps_g^2.
Derivs rhs(const PsiEnvelope& env, const OdeState& s, int n, double eps_g = 1e-9);

/// Integrates from (d0, h, gamma) in arclength form, so vertical tangents are regular events.
///
/// Hits* trajectories are truncated at the last crossing of 1 - |g| = eps_g before the
/// turning point; the turning point itself is `end.d_stop`.
Trajectory integrate(const PsiEnvelope& env, const ShootingConfig& cfg, double h, double gamma, Direction dir);

double choose_d0(const PsiEnvelope& env, int n, double margin);

enum class Membership { InA, NotInA };
Membership classify(const Trajectory& backward);
Membership classify_gamma(const PsiEnvelope& env, const ShootingConfig& cfg, double h, double gamma);

struct Gamma0Result {
    double gamma0;
    double bracket_width;
    double lower;  // NotInA end
    double upper;  // InA end
    double delta_est;  // gamma0 - (-1)
    int iterations;
    Trajectory trajectory_below;  // HitsMinusOne
    Trajectory trajectory_above;  // ReachedZero or HitsPlusOne

    /// Backward profile used downstream: the HitsMinusOne witness, which lies above the
    /// critical trajectory (w_below >= w_gamma0), so it never undercuts a supersolution.
    const Trajectory& witness() const noexcept { return trajectory_below; }
    /// Signed distance of the witness truncation point.
    double d_min() const { return trajectory_below.samples.back().d; }
};

Gamma0Result find_gamma0(const PsiEnvelope& env, const ShootingConfig& cfg, double h);

/// rho(d) = cosh^{1-n}(d) * integral_{d0}^{d} psi(s, 0) cosh^{n-1}(s) ds, d >= d0.
double rho_eval(const PsiEnvelope& env, const ShootingConfig& cfg, double d);
/// Upper bound on the integral of rho over [d1, d2]; d2 may be +inf.
double rho_tail_bound(const PsiEnvelope& env, const ShootingConfig& cfg, double d1, double d2);

struct EllResult {
    double value;
    double tail;
    double beta;
    Gamma0Result g0;
    Trajectory forward;
};

EllResult ell(const PsiEnvelope& env, const ShootingConfig& cfg, double h);
/// As ell() but reusing an existing gamma0 computation.
EllResult ell_from(const PsiEnvelope& env, const ShootingConfig& cfg, double h, Gamma0Result g0);

struct SigmaResult {
    double sigma;
    double C0;
    double C1;
    double beta;
    double gamma0_frozen;  // gamma0 of the t-frozen envelope, a lower bound for every gamma0(h)
};

/// sigma = C0 (cosh^{1-n}(d0) + rho(d0) + integral_{d0}^inf psi(s, 0) ds).
SigmaResult sigma_bound(const PsiEnvelope& env, const ShootingConfig& cfg);

struct HeightSolve {
    double h_c;
    double gamma0;
    double ell_value;
    double tail;
    double sigma;
    double bracket_lo;
    double bracket_hi;
    int evaluations;
    EllResult at_root;
};

HeightSolve solve_height(const PsiEnvelope& env, const ShootingConfig& cfg, double c);
/// Same, with a precomputed sigma (sigma does not depend on c).
HeightSolve solve_height(const PsiEnvelope& env, const ShootingConfig& cfg, double c, const SigmaResult& sigma);

struct Residuals {
    double max_w;
    double max_g;
    std::vector<double> w;  // per sample
    std::vector<double> g;
};

/// Residuals of the integral representations of w and g, computed only from the stored
/// (d, w, g) samples; h, gamma and d0 are read from the first sample.
Residuals residual_integral_forms(const PsiEnvelope& env, int n, const std::vector<OdeState>& samples);
Residuals residual_integral_forms(const PsiEnvelope& env, const ShootingConfig& cfg, const Trajectory& tr);

/// Backward witness (reversed, excluding d0) followed by the forward run: increasing d.
std::vector<OdeState> full_profile(const Trajectory& backward, const Trajectory& forward);

}  // namespace scherk

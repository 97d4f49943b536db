#include "scherk/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scherk/errors.hpp"
#include "scherk/ode.hpp"
#include "scherk/quadrature.hpp"

namespace scherk {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kGammaLow = -1.0 + 1e-6;

double log_cosh(double x) {
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

// (cosh a / cosh b)^k
double cosh_ratio_pow(double a, double b, double k) { return std::exp(k * (log_cosh(a) - log_cosh(b))); }

double anchor_condition(const PsiEnvelope& env, int n, double d) {
    return 0.5 * (n - 1) * std::tanh(d) - psi_eval(env, d, 0.0);
}

}  // namespace

const char* to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::HitsMinusOne: return "HitsMinusOne";
        case Outcome::HitsPlusOne: return "HitsPlusOne";
        case Outcome::ReachedZero: return "ReachedZero";
        case Outcome::ReachedHorizon: return "ReachedHorizon";
    }
    return "?";
}

void SolverOptions::validate() const {
    require(std::isfinite(rk_tol) && rk_tol > 0.0 && rk_tol <= 1e-4, "rk_tol must lie in (0, 1e-4]");
    require(std::isfinite(eps_g) && eps_g > 0.0 && eps_g < 1e-3, "eps_g must lie in (0, 1e-3)");
    require(std::isfinite(d_max) && d_max > 0.0, "d_max must be positive");
    require(std::isfinite(bisect_tol) && bisect_tol > 0.0 && bisect_tol < 1e-2, "bisect_tol must lie in (0, 1e-2)");
    require(std::isfinite(margin) && margin > 0.0, "margin must be positive");
    require(std::isfinite(d0) && d0 >= 0.0, "d0 override must be >= 0");
}

void ShootingConfig::validate(const PsiEnvelope& env) const {
    require(n >= 2 && n == env.n, "config dimension must be >= 2 and match the envelope");
    require(std::isfinite(rk_tol) && rk_tol > 0.0 && rk_tol <= 1e-4, "rk_tol must lie in (0, 1e-4]");
    require(std::isfinite(eps_g) && eps_g > 0.0 && eps_g < 1e-3, "eps_g must lie in (0, 1e-3)");
    require(std::isfinite(bisect_tol) && bisect_tol > 0.0 && bisect_tol < 1e-2, "bisect_tol must lie in (0, 1e-2)");
    require(std::isfinite(d0) && d0 > 0.0, "d0 must be positive");
    require(d0 > d_tilde(env), "d0 must exceed the envelope split point d~");
    require(anchor_condition(env, n, d0) > 0.0, "d0 violates (n-1)/2 tanh d0 - psi(d0, 0) > 0");
    require(std::isfinite(d_max) && d_max > d0, "d_max must exceed d0");
}

ShootingConfig make_config(const PsiEnvelope& env, const SolverOptions& opt) {
    opt.validate();
    ShootingConfig cfg;
    cfg.n = env.n;
    cfg.d0 = opt.d0 > 0.0 ? opt.d0 : choose_d0(env, env.n, opt.margin);
    cfg.rk_tol = opt.rk_tol;
    cfg.eps_g = opt.eps_g;
    cfg.d_max = opt.d_max;
    cfg.bisect_tol = opt.bisect_tol;
    cfg.validate(env);
    return cfg;
}

Derivs rhs(const PsiEnvelope& env, const OdeState& s, int n, double eps_g) {
    double q = (1.0 - s.g) * (1.0 + s.g);
    if (!(q >= eps_g * eps_g)) {
        fail(ErrorKind::NearSingularity, "1 - g^2 = " + std::to_string(q) + " below eps_g^2");
    }
    return {s.g / std::sqrt(q), -(n - 1) * std::tanh(s.d) * s.g - psi_eval(env, s.d, s.w)};
}

Trajectory integrate(const PsiEnvelope& env, const ShootingConfig& cfg, double h, double gamma, Direction dir) {
    require(std::isfinite(h), "initial height must be finite");
    require(std::isfinite(cfg.d0) && cfg.d0 > 0.0 && cfg.d_max > cfg.d0, "need 0 < d0 < d_max");
    require(std::isfinite(gamma) && gamma > -1.0 && gamma < 1.0, "gamma must lie in (-1, 1)");
    const double sgn = dir == Direction::BackwardToZero ? -1.0 : 1.0;
    const double nm1 = cfg.n - 1.0;
    const double eps = cfg.eps_g;

    // y = (d, w, alpha) with g = sin(alpha), parametrized by arclength of the graph
    using S = std::array<double, 3>;
    auto f = [&](double, const S& y) -> S {
        double sa = std::sin(y[2]), ca = std::cos(y[2]);
        double a = -nm1 * std::tanh(y[0]) * sa - psi_eval(env, y[0], y[1]);
        return {sgn * ca, sgn * sa, sgn * a};
    };
    Dopri5Options opt;
    opt.rtol = cfg.rk_tol;
    opt.atol = 1e-2 * cfg.rk_tol;
    opt.h_init = 1e-3;
    opt.h_max = 0.1;
    auto ode = make_dopri5<3>(f, 0.0, S{cfg.d0, h, std::asin(gamma)}, opt);

    auto boundary = [&](const S& y) { return dir == Direction::BackwardToZero ? y[0] : cfg.d_max - y[0]; };
    auto turn = [](const S& y) { return std::cos(y[2]); };
    auto outside_margin = [&](const S& y) { return (1.0 - eps) - std::abs(std::sin(y[2])); };
    auto to_state = [](const S& y) { return OdeState{y[0], y[1], std::sin(y[2])}; };

    Trajectory tr;
    tr.direction = dir;
    tr.samples.push_back(to_state(ode.y()));
    // index and state of the most recent entry into the margin band 1 - |g| <= eps
    std::size_t entry_index = 0;
    OdeState entry_state = tr.samples.front();

    for (;;) {
        ode.step();
        const double s0 = ode.t_prev(), s1 = ode.t();
        const S y0 = ode.y_prev(), y1 = ode.y();
        auto on_step = [&](auto&& fn) { return [&, fn](double s) { return fn(ode.dense(s)); }; };

        double s_bd = std::numeric_limits<double>::infinity(), s_turn = s_bd;
        if (boundary(y1) <= 0.0) s_bd = locate_root(on_step(boundary), s0, s1, boundary(y0), boundary(y1));
        if (turn(y1) <= 0.0) s_turn = locate_root(on_step(turn), s0, s1, turn(y0), turn(y1));

        if (std::isfinite(s_turn) && s_turn <= s_bd) {
            double m0 = outside_margin(y0);
            if (m0 > 0.0) {
                double se = locate_root(on_step(outside_margin), s0, s_turn, m0, outside_margin(ode.dense(s_turn)));
                entry_index = tr.samples.size();
                entry_state = to_state(ode.dense(se));
            }
            S yt = ode.dense(s_turn);
            tr.samples.resize(entry_index);
            if (tr.samples.empty() || tr.samples.back().d != entry_state.d) tr.samples.push_back(entry_state);
            tr.end = {std::sin(yt[2]) > 0.0 ? Outcome::HitsPlusOne : Outcome::HitsMinusOne, yt[0]};
            break;
        }
        if (std::isfinite(s_bd)) {
            S yb = ode.dense(s_bd);
            yb[0] = dir == Direction::BackwardToZero ? 0.0 : cfg.d_max;
            if (tr.samples.back().d != yb[0]) tr.samples.push_back(to_state(yb));
            tr.end = {dir == Direction::BackwardToZero ? Outcome::ReachedZero : Outcome::ReachedHorizon, yb[0]};
            break;
        }

        double m0 = outside_margin(y0), m1 = outside_margin(y1);
        if (m0 > 0.0 && m1 <= 0.0) {
            double se = locate_root(on_step(outside_margin), s0, s1, m0, m1);
            entry_index = tr.samples.size();
            entry_state = to_state(ode.dense(se));
        }
        tr.samples.push_back(to_state(y1));
    }
    tr.steps = ode.steps();
    return tr;
}

double choose_d0(const PsiEnvelope& env, int n, double margin) {
    require(n >= 2, "dimension n must be >= 2");
    require(std::isfinite(margin) && margin > 0.0, "margin must be positive");
    double start = std::max(d_tilde(env), 0.0);
    auto ok = [&](double d) { return anchor_condition(env, n, d) >= margin; };
    const double step = 0.01;
    double prev = start;
    for (int k = 1; start + k * step <= 50.0; ++k) {
        double d = start + k * step;
        if (ok(d)) {
            double lo = prev, hi = d;
            if (ok(lo) && lo > start) return lo;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                double mid = 0.5 * (lo + hi);
                (ok(mid) ? hi : lo) = mid;
            }
            return hi;
        }
        prev = d;
    }
    fail(ErrorKind::NotFound, "no d0 <= 50 satisfies the anchor condition with margin " + std::to_string(margin));
}

Membership classify(const Trajectory& tr) {
    switch (tr.end.kind) {
        case Outcome::ReachedZero:
        case Outcome::HitsPlusOne: return Membership::InA;
        case Outcome::HitsMinusOne: return Membership::NotInA;
        case Outcome::ReachedHorizon: break;
    }
    fail(ErrorKind::Validation, "classify expects a backward trajectory");
}

Membership classify_gamma(const PsiEnvelope& env, const ShootingConfig& cfg, double h, double gamma) {
    return classify(integrate(env, cfg, h, gamma, Direction::BackwardToZero));
}

namespace {

Gamma0Result bisect_gamma0(const PsiEnvelope& env, const ShootingConfig& cfg, double h,
                           std::optional<std::pair<double, double>> hint) {
    auto run = [&](double g) { return integrate(env, cfg, h, g, Direction::BackwardToZero); };
    Gamma0Result r{};
    double lo = kGammaLow, hi = 0.0;
    Trajectory tlo, thi;
    bool have_lo = false, have_hi = false;
    if (hint) {
        double c = hint->first, hw = std::max(hint->second, cfg.bisect_tol);
        for (double w = hw; !have_lo && c - w > kGammaLow; w *= 16.0) {
            Trajectory t = run(c - w);
            if (classify(t) == Membership::NotInA) {
                lo = c - w;
                tlo = std::move(t);
                have_lo = true;
            } else {
                hi = c - w;
                thi = std::move(t);
                have_hi = true;
            }
        }
        for (double w = hw; !have_hi && c + w < 0.0; w *= 16.0) {
            Trajectory t = run(c + w);
            if (classify(t) == Membership::InA) {
                hi = c + w;
                thi = std::move(t);
                have_hi = true;
            } else if (c + w > lo) {
                lo = c + w;
                tlo = std::move(t);
                have_lo = true;
            }
        }
    }
    if (!have_lo) {
        lo = kGammaLow;
        tlo = run(lo);
        if (classify(tlo) != Membership::NotInA) {
            fail(ErrorKind::BracketFailure, "gamma = -1 + 1e-6 is already in A");
        }
    }
    if (!have_hi) {
        hi = 0.0;
        thi = run(hi);
        if (classify(thi) != Membership::InA) fail(ErrorKind::BracketFailure, "gamma = 0 is not in A");
    }
    int it = 0;
    while (hi - lo > cfg.bisect_tol && it < 200) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        Trajectory t = run(mid);
        if (classify(t) == Membership::InA) {
            hi = mid;
            thi = std::move(t);
        } else {
            lo = mid;
            tlo = std::move(t);
        }
        ++it;
    }
    r.lower = lo;
    r.upper = hi;
    r.gamma0 = 0.5 * (lo + hi);
    r.bracket_width = hi - lo;
    r.delta_est = r.gamma0 + 1.0;
    r.iterations = it;
    r.trajectory_below = std::move(tlo);
    r.trajectory_above = std::move(thi);
    return r;
}

}  // namespace

Gamma0Result find_gamma0(const PsiEnvelope& env, const ShootingConfig& cfg, double h) {
    cfg.validate(env);
    require(std::isfinite(h), "initial height must be finite");
    return bisect_gamma0(env, cfg, h, std::nullopt);
}

double rho_eval(const PsiEnvelope& env, const ShootingConfig& cfg, double d) {
    require(d >= cfg.d0, "rho_eval needs d >= d0");
    if (env.is_zero() || d == cfg.d0) return 0.0;
    const double k = cfg.n - 1.0;
    auto f = [&](double s) { return psi_eval(env, s, 0.0) * cosh_ratio_pow(s, d, k); };
    double split = env.offset;
    if (split > cfg.d0 && split < d) return integrate(f, cfg.d0, split).value + integrate(f, split, d).value;
    return integrate(f, cfg.d0, d).value;
}

double rho_tail_bound(const PsiEnvelope& env, const ShootingConfig& cfg, double d1, double d2) {
    require(d1 >= cfg.d0 && d2 >= d1, "rho_tail_bound needs d0 <= d1 <= d2");
    if (env.is_zero()) return 0.0;
    const double k = cfg.n - 1.0;
    double psi_int = std::isinf(d2) ? psi_tail_integral(env, d1, 0.0) : psi_integral(env, d1, d2) * (1.0 + 1e-12);
    return std::pow(2.0, k) / k * (rho_eval(env, cfg, d1) + psi_int);
}

namespace {

// upper bound on the integral of sech^{k}(s) over [d, inf)
double sech_pow_tail(double d, double k) { return std::pow(2.0, k) * std::exp(-k * d) / k; }

}  // namespace

EllResult ell_from(const PsiEnvelope& env, const ShootingConfig& cfg, double h, Gamma0Result g0) {
    Trajectory fwd = integrate(env, cfg, h, g0.lower, Direction::ForwardToHorizon);
    if (fwd.end.kind != Outcome::ReachedHorizon) {
        fail(ErrorKind::NearSingularity,
             std::string("forward gamma0 trajectory ended with ") + to_string(fwd.end.kind));
    }
    const double k = cfg.n - 1.0;
    EllResult r{};
    r.value = fwd.samples.back().w;
    r.beta = std::max(0.5, std::abs(g0.gamma0));
    double C1 = 1.0 / std::sqrt((1.0 - r.beta) * (1.0 + r.beta));
    r.tail = C1 * (std::pow(std::cosh(cfg.d0), k) * sech_pow_tail(cfg.d_max, k) +
                   rho_tail_bound(env, cfg, cfg.d_max, std::numeric_limits<double>::infinity()));
    r.g0 = std::move(g0);
    r.forward = std::move(fwd);
    return r;
}

EllResult ell(const PsiEnvelope& env, const ShootingConfig& cfg, double h) {
    return ell_from(env, cfg, h, find_gamma0(env, cfg, h));
}

SigmaResult sigma_bound(const PsiEnvelope& env, const ShootingConfig& cfg) {
    cfg.validate(env);
    SigmaResult s{};
    // psi(s, 0) dominates psi(s, w) for every w, so the frozen problem's gamma0 is below every gamma0(h)
    s.gamma0_frozen = env.is_zero() ? -std::pow(std::cosh(cfg.d0), 1.0 - cfg.n)
                                    : find_gamma0(env.frozen(), cfg, 0.0).gamma0;
    s.beta = std::max(0.5, std::abs(s.gamma0_frozen));
    s.C1 = 1.0 / std::sqrt((1.0 - s.beta) * (1.0 + s.beta));
    const double k = cfg.n - 1.0;
    double two_k = std::pow(2.0, k) / k;
    s.C0 = s.C1 * std::max({std::pow(std::cosh(cfg.d0), k) * two_k, two_k, 1.0});
    s.sigma = s.C0 * (std::pow(std::cosh(cfg.d0), -k) + rho_eval(env, cfg, cfg.d0) +
                      psi_tail_integral(env, cfg.d0, 0.0));
    return s;
}

HeightSolve solve_height(const PsiEnvelope& env, const ShootingConfig& cfg, double c) {
    return solve_height(env, cfg, c, sigma_bound(env, cfg));
}

HeightSolve solve_height(const PsiEnvelope& env, const ShootingConfig& cfg, double c, const SigmaResult& sigma) {
    cfg.validate(env);
    require(std::isfinite(c), "target constant c must be finite");
    HeightSolve out{};
    out.sigma = sigma.sigma;
    out.bracket_lo = c - sigma.sigma - 1.0;
    out.bracket_hi = c + sigma.sigma + 1.0;

    std::optional<std::pair<double, double>> hint;
    auto eval = [&](double h) {
        Gamma0Result g0 = bisect_gamma0(env, cfg, h, hint);
        hint = std::make_pair(g0.gamma0, std::max(1e-6, 1e3 * cfg.bisect_tol));
        ++out.evaluations;
        return ell_from(env, cfg, h, std::move(g0));
    };

    double a = out.bracket_lo, b = out.bracket_hi;
    EllResult ea = eval(a);
    double fa = ea.value - c;
    EllResult eb = eval(b);
    double fb = eb.value - c;
    if (!(fa <= 0.0 && fb >= 0.0)) {
        fail(ErrorKind::BracketFailure, "l(h) - c does not change sign on [c - sigma - 1, c + sigma + 1]: f(lo) = " +
                                            std::to_string(fa) + ", f(hi) = " + std::to_string(fb));
    }
    auto finish = [&](double h, EllResult& e) {
        out.h_c = h;
        out.gamma0 = e.g0.gamma0;
        out.ell_value = e.value;
        out.tail = e.tail;
        out.at_root = std::move(e);
        return out;
    };
    const double target = 1e-2 * std::max(1e-6, 2.0 * std::max(ea.tail, eb.tail));
    if (std::abs(fa) <= target) return finish(a, ea);
    if (std::abs(fb) <= target) return finish(b, eb);

    // Illinois regula falsi; l(h) - h is bounded, so the secant slope is near 1
    int side = 0;
    for (int it = 0; it < 80; ++it) {
        double m = (fa * b - fb * a) / (fa - fb);
        if (!(m > a && m < b)) m = 0.5 * (a + b);
        EllResult em = eval(m);
        double fm = em.value - c;
        if (std::abs(fm) <= target || b - a <= 1e-13 * std::max(1.0, std::abs(m))) return finish(m, em);
        if (fm < 0.0) {
            a = m;
            fa = fm;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = m;
            fb = fm;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
    }
    EllResult em = eval(0.5 * (a + b));
    return finish(0.5 * (a + b), em);
}

namespace {

// Quintic Hermite through values, first and second derivatives at both ends.
struct Hermite5 {
    double x0, x1, y0, y1, m0, m1, a0, a1;
    double operator()(double x) const {
        double hh = x1 - x0;
        double t = (x - x0) / hh;
        double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
        double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
        double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
        double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
        double h3 = 0.5 * (t3 - 2 * t4 + t5);
        double h4 = -4 * t3 + 7 * t4 - 3 * t5;
        double h5 = 10 * t3 - 15 * t4 + 6 * t5;
        return y0 * h0 + hh * m0 * h1 + hh * hh * (a0 * h2 + a1 * h3) + hh * m1 * h4 + y1 * h5;
    }
};

struct Hermite3 {
    double x0, x1, y0, y1, m0, m1;
    double operator()(double x) const {
        double hh = x1 - x0;
        double t = (x - x0) / hh;
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * hh * m0 + (-2 * t3 + 3 * t2) * y1 +
               (t3 - t2) * hh * m1;
    }
};

double slope_w(double g) {
    double q = (1.0 - g) * (1.0 + g);
    q = std::max(q, 1e-300);
    return g / std::sqrt(q);
}

// Local jet of the (w, g) system at a sample: w', w'', g', g''.
struct Jet {
    double w1, w2, g1, g2;
};

Jet jet(const PsiEnvelope& env, double k, const OdeState& s) {
    double q = std::max((1.0 - s.g) * (1.0 + s.g), 1e-300);
    double w1 = s.g / std::sqrt(q);
    double th = std::tanh(s.d);
    double g1 = -k * th * s.g - psi_eval(env, s.d, s.w);
    PsiPartials dp = psi_partials(env, s.d, s.w);
    double g2 = -k * ((1.0 - th * th) * s.g + th * g1) - dp.dd - dp.dt * w1;
    double w2 = g1 / (q * std::sqrt(q));
    return {w1, w2, g1, g2};
}

}  // namespace

Residuals residual_integral_forms(const PsiEnvelope& env, int n, const std::vector<OdeState>& samples) {
    require(!samples.empty(), "residuals need at least one sample");
    const double k = n - 1.0;
    const OdeState& s0 = samples.front();
    Residuals r;
    r.w.assign(samples.size(), 0.0);
    r.g.assign(samples.size(), 0.0);
    double wint = s0.w;
    double A = 0.0;  // integral of psi cosh^{n-1} from d0, scaled by cosh^{1-n}(d)
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const OdeState& a = samples[i - 1];
        const OdeState& b = samples[i];
        Jet ja = jet(env, k, a), jb = jet(env, k, b);
        double wstep, step_int;
        bool near_vertical = std::min((1.0 - a.g) * (1.0 + a.g), (1.0 - b.g) * (1.0 + b.g)) < 1e-6;
        if (near_vertical && ja.g1 * jb.g1 > 0.0) {
            // g is not smooth in d next to a vertical tangent; alpha = asin g is a regular parameter
            double aa = std::asin(a.g), ab = std::asin(b.g);
            // d and w as functions of alpha: d' = cos/G, w' = sin/G with G = dg/dd
            struct AlphaJet {
                double d1, d2, w1, w2;
            };
            auto ajet = [&](const OdeState& s, double al, double G) {
                double ca = std::cos(al), sa = std::sin(al), th = std::tanh(s.d);
                double d1 = ca / G, w1 = sa / G;
                PsiPartials dp = psi_partials(env, s.d, s.w);
                double Ga = -k * th * ca + (-k * (1.0 - th * th) * sa - dp.dd) * d1 - dp.dt * w1;
                return AlphaJet{d1, -sa / G - ca * Ga / (G * G), w1, ca / G - sa * Ga / (G * G)};
            };
            AlphaJet qa = ajet(a, aa, ja.g1), qb = ajet(b, ab, jb.g1);
            Hermite5 dh{aa, ab, a.d, b.d, qa.d1, qb.d1, qa.d2, qb.d2};
            Hermite5 wh{aa, ab, a.w, b.w, qa.w1, qb.w1, qa.w2, qb.w2};
            auto G = [&](double al) {
                double d = dh(al);
                return -k * std::tanh(d) * std::sin(al) - psi_eval(env, d, wh(al));
            };
            auto fw = [&](double al) { return std::sin(al) / G(al); };
            auto fg = [&](double al) {
                double d = dh(al);
                return psi_eval(env, d, wh(al)) * cosh_ratio_pow(d, b.d, k) * std::cos(al) / G(al);
            };
            double lo = std::min(aa, ab), hi = std::max(aa, ab), orient = ab > aa ? 1.0 : -1.0;
            wstep = orient * integrate(fw, lo, hi, 1e-12, 4).value;
            step_int = env.is_zero() ? 0.0 : orient * integrate(fg, lo, hi, 1e-12, 4).value;
        } else {
            Hermite5 gh{a.d, b.d, a.g, b.g, ja.g1, jb.g1, ja.g2, jb.g2};
            Hermite5 wh{a.d, b.d, a.w, b.w, ja.w1, jb.w1, ja.w2, jb.w2};
            double lo = std::min(a.d, b.d), hi = std::max(a.d, b.d), orient = b.d > a.d ? 1.0 : -1.0;
            auto fw = [&](double x) {
                double g = std::clamp(gh(x), -1.0 + 1e-16, 1.0 - 1e-16);
                return slope_w(g);
            };
            auto fg = [&](double x) { return psi_eval(env, x, wh(x)) * cosh_ratio_pow(x, b.d, k); };
            wstep = orient * integrate(fw, lo, hi, 1e-12, 4).value;
            step_int = env.is_zero() ? 0.0 : orient * integrate(fg, lo, hi, 1e-12, 4).value;
        }
        wint += wstep;
        A = A * cosh_ratio_pow(a.d, b.d, k) + step_int;
        double gint = s0.g * cosh_ratio_pow(s0.d, b.d, k) - A;
        r.w[i] = std::abs(wint - b.w);
        r.g[i] = std::abs(gint - b.g);
    }
    r.max_w = *std::max_element(r.w.begin(), r.w.end());
    r.max_g = *std::max_element(r.g.begin(), r.g.end());
    return r;
}

Residuals residual_integral_forms(const PsiEnvelope& env, const ShootingConfig& cfg, const Trajectory& tr) {
    return residual_integral_forms(env, cfg.n, tr.samples);
}

std::vector<OdeState> full_profile(const Trajectory& backward, const Trajectory& forward) {
    std::vector<OdeState> out(backward.samples.rbegin(), backward.samples.rend());
    if (!forward.samples.empty()) {
        auto it = forward.samples.begin();
        if (!out.empty() && it->d == out.back().d) ++it;
        out.insert(out.end(), it, forward.samples.end());
    }
    return out;
}

}  // namespace scherk

#include "scherk/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <thread>

#include "scherk/errors.hpp"
#include "scherk/quadrature.hpp"

namespace scherk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- seeding

std::uint32_t fnv1a(const std::string& s) {
    std::uint32_t h = 2166136261u;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 16777619u;
    }
    return h;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t tag, int n, int trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag,
                      static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(trial)};
    return std::mt19937_64(seq);
}

double uni(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
bool coin(std::mt19937_64& rng) { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; }

// ---------------------------------------------------------------- cases

DecaySpec random_phi(std::mt19937_64& rng, double a_max) {
    double a = uni(rng, 0.2, a_max);
    if (coin(rng)) return DecaySpec::sech(a, uni(rng, 0.5, 2.0));
    return DecaySpec::inverse_power(a, uni(rng, 4.0, 8.0));
}

HeightSpec random_h(std::mt19937_64& rng) {
    double c0 = uni(rng, 0.2, 2.0);
    if (coin(rng)) return HeightSpec::sech(c0, uni(rng, 0.3, 2.0));
    return HeightSpec::gauss(c0, uni(rng, 0.1, 1.0));
}

struct ShootCase {
    RunConfig rc;
    double h0 = 0.0;
    double gamma_rand = 0.0;
    PsiEnvelope env;
    std::optional<std::string> error;
    ShootingConfig cfg;
    Gamma0Result g0, g0_half, g0_dh;
    EllResult el;
    Trajectory rand_fwd;
    SigmaResult sig{};
    std::vector<std::pair<double, HeightSolve>> solves;
    Residuals res_witness{}, res_forward{};
    std::optional<ScherkBarrier> super_b, sub_b;
    json replay;
};

struct RadialCase {
    RadialProblem p;
    std::optional<std::string> error;
    RadialSolution sol;
    json replay;
};

ShootCase make_shoot_case(const VerificationPlan& plan, int n, int trial) {
    ShootCase c;
    auto rng = make_rng(plan.seed, fnv1a("case.shooting"), n, trial);
    c.rc.n = n;
    if (plan.generator == Generator::Zero) {
        c.rc.phi = DecaySpec::zero();
        c.rc.h = HeightSpec::zero();
        c.rc.offset = 0.0;
    } else {
        c.rc.phi = random_phi(rng, 1.5);
        c.rc.h = random_h(rng);
        c.rc.offset = uni(rng, -3.0, 3.0);
    }
    c.h0 = uni(rng, -3.0, 3.0);
    c.gamma_rand = uni(rng, -0.9, 0.9);
    c.env = c.rc.envelope();
    c.replay = {{"config", to_json(c.rc)}, {"h", c.h0}, {"gamma", c.gamma_rand}, {"n", n}, {"trial", trial}};
    try {
        c.cfg = make_config(c.env, c.rc.solver);
        c.g0 = find_gamma0(c.env, c.cfg, c.h0);
        ShootingConfig half = c.cfg;
        half.eps_g *= 0.5;
        c.g0_half = find_gamma0(c.env, half, c.h0);
        c.g0_dh = find_gamma0(c.env, c.cfg, c.h0 + 1e-3);
        c.el = ell_from(c.env, c.cfg, c.h0, c.g0);
        c.rand_fwd = integrate(c.env, c.cfg, c.h0, c.gamma_rand, Direction::ForwardToHorizon);
        c.sig = sigma_bound(c.env, c.cfg);
        for (double target : {-3.0, 0.0, 3.0}) c.solves.emplace_back(target, solve_height(c.env, c.cfg, target, c.sig));
        c.res_witness = residual_integral_forms(c.env, c.cfg, c.g0.witness());
        c.res_forward = residual_integral_forms(c.env, c.cfg, c.el.forward);
        EnvelopeContext ctx = c.rc.context();
        GeodesicWall wall = wall_at_offset(n, c.rc.offset);
        c.super_b = build_super(ctx, wall, 0.0);
        c.sub_b = build_sub(ctx, wall, 0.0);
    } catch (const Error& e) {
        c.error = e.what();
    }
    return c;
}

RadialCase make_radial_case(const VerificationPlan& plan, int n, int trial) {
    RadialCase c;
    auto rng = make_rng(plan.seed, fnv1a("case.radial"), n, trial);
    const double k = n - 1.0;
    c.p.n = n;
    c.p.R = uni(rng, 0.5, 3.0);
    c.p.c = uni(rng, -2.0, 2.0);
    if (plan.generator == Generator::Zero) {
        c.p.f = RadialSource::constant(0.0);
    } else {
        int pick = std::uniform_int_distribution<int>(0, 2)(rng);
        int sign = coin(rng) ? 1 : -1;
        if (pick == 0) c.p.f = RadialSource::constant(uni(rng, -0.9, 0.9) * k);
        if (pick == 1) c.p.f = RadialSource::radial_decay(random_phi(rng, k), sign);
        if (pick == 2) c.p.f = RadialSource::separable(random_phi(rng, k), random_h(rng), sign);
    }
    json cfg = {{"n", n}, {"R", c.p.R}, {"c", c.p.c}, {"source", to_json(c.p.f)}};
    if (c.p.f.kind != RadialSource::Kind::Constant) cfg["phi"] = to_json(c.p.f.phi);
    if (c.p.f.kind == RadialSource::Kind::SeparableMonotone) cfg["h"] = to_json(c.p.f.h);
    c.replay = {{"problem", cfg}, {"trial", trial}};
    try {
        c.sol = solve_radial_dirichlet(c.p);
    } catch (const Error& e) {
        c.error = e.what();
    }
    return c;
}

// ---------------------------------------------------------------- properties

struct Ctx {
    const ShootCase* s;
    const RadialCase* r;
    std::mt19937_64 rng;
    double tol;
    std::string note;
};

enum class Needs { Envelope, Shooting, Radial };

struct Property {
    PropertyInfo info;
    Needs needs;
    std::function<double(Ctx&)> check;
};

double cosh_pow(double d, double k) { return std::exp(k * (std::abs(d) + std::log1p(std::exp(-2.0 * std::abs(d))) - std::log(2.0))); }

// samples with d > d0 for the forward trajectories, (d_min, d0] for the witness
template <class F>
double over_samples(const Trajectory& tr, F f) {
    double m = kInf;
    for (const OdeState& s : tr.samples) m = std::min(m, f(s));
    return m;
}

// slack of "q = cosh^k g is nonincreasing in d" along a trajectory; g carries an absolute
// error of order atol, which cosh^k amplifies at large d
double cosh_g_slack(const Trajectory& tr, double k, double rel, double atol) {
    struct Q {
        double d, q, c;
    };
    std::vector<Q> q;
    for (const OdeState& s : tr.samples) q.push_back({s.d, cosh_pow(s.d, k) * s.g, cosh_pow(s.d, k)});
    std::sort(q.begin(), q.end(), [](const Q& a, const Q& b) { return a.d < b.d; });
    double m = kInf;
    for (std::size_t i = 0; i + 1 < q.size(); ++i)
        m = std::min(m, q[i].q - q[i + 1].q + rel * std::max(1.0, std::abs(q[i].q)) + 100.0 * atol * q[i + 1].c);
    return m;
}

// w(d) - l over [d, inf): the tail bound of ell_from with d_max replaced by d
double tail_bound_at(const ScherkBarrier& b, double d) {
    const double k = b.n - 1.0;
    double beta = std::max(0.5, std::abs(b.gamma0));
    double C1 = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
    return C1 * (cosh_pow(b.d0, k) * std::pow(2.0, k) * std::exp(-k * d) / k + rho_tail_bound(b.env, b.cfg, d, kInf));
}

std::vector<Property> build_registry() {
    std::vector<Property> P;
    auto add = [&](std::string id, std::string anchor, double tol, int max_trials, Needs needs,
                   std::function<double(Ctx&)> f) {
        P.push_back({{std::move(id), std::move(anchor), tol, max_trials}, needs, std::move(f)});
    };
    const int all = 1 << 30;

    // envelope
    add("envelope.psi_bounds", "0 <= psi <= sup psi on a (d, t) grid", 0.0, all, Needs::Envelope, [](Ctx& c) {
        const PsiEnvelope& e = c.s->env;
        double sup = psi_sup(e), m = kInf;
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; j <= 26; ++j) {
                double v = psi_eval(e, e.offset - 10.0 + 0.5 * i, -3.0 + 0.5 * j);
                m = std::min({m, v, sup - v});
            }
        return m + c.tol;
    });
    add("envelope.psi_t_monotone", "psi nonincreasing in t >= 0 and constant for t <= 0", 0.0, all, Needs::Envelope,
        [](Ctx& c) {
            const PsiEnvelope& e = c.s->env;
            double m = kInf;
            for (int i = 0; i <= 20; ++i) {
                double d = e.offset - 10.0 + i;
                double at0 = psi_eval(e, d, 0.0);
                for (int j = 0; j < 52; ++j) {
                    double t = -3.0 + 0.25 * j;
                    double a = psi_eval(e, d, t), b = psi_eval(e, d, t + 0.25);
                    m = std::min(m, a - b);
                    if (t < 0.0) m = std::min(m, -std::abs(a - at0));
                }
            }
            return m + c.tol;
        });
    add("envelope.psi_d_unimodal", "psi increasing in d before the offset and decreasing after", 0.0, all,
        Needs::Envelope, [](Ctx& c) {
            const PsiEnvelope& e = c.s->env;
            double m = kInf;
            for (double t : {0.0, 0.5, 2.0})
                for (int i = 0; i < 100; ++i) {
                    double a = e.offset + 0.1 * i, b = a + 0.1;
                    m = std::min(m, psi_eval(e, a, t) - psi_eval(e, b, t));
                    m = std::min(m, psi_eval(e, -a + 2 * e.offset, t) - psi_eval(e, -b + 2 * e.offset, t));
                }
            return m + c.tol;
        });
    add("envelope.psi_decay", "psi decays as |d - offset| and t grow", 0.0, all, Needs::Envelope, [](Ctx& c) {
        const PsiEnvelope& e = c.s->env;
        double m = kInf;
        for (double s : {-1.0, 1.0}) {
            double far = psi_eval(e, e.offset + 40.0 * s, 0.0), mid = psi_eval(e, e.offset + 20.0 * s, 0.0);
            m = std::min({m, mid - far, std::sqrt(e.phi(20.0) * e.h(0.0)) - mid});
        }
        for (int i = 0; i <= 20; ++i) {
            double d = e.offset - 10.0 + i;
            m = std::min({m, psi_eval(e, d, 20.0) - psi_eval(e, d, 40.0),
                          std::sqrt(e.phi(0.0) * e.h(20.0)) - psi_eval(e, d, 20.0)});
        }
        return m + c.tol;
    });
    add("envelope.psi_integrable", "integral of psi(s, t) over s >= 0 is finite and bounded by the tail formula",
        1e-10, all, Needs::Envelope, [](Ctx& c) {
            const PsiEnvelope& e = c.s->env;
            double I = psi_tail_integral(e, 0.0, 0.0);
            if (!std::isfinite(I)) return -1.0;
            double Q = psi_integral(e, 0.0, 60.0);
            return I - Q + c.tol * std::max(1.0, I);
        });
    add("envelope.psi_partials", "closed-form partials of psi match central differences", 1e-5, all,
        Needs::Envelope, [](Ctx& c) {
            const PsiEnvelope& e = c.s->env;
            double worst = 0.0;
            for (int i = 0; i < 20; ++i) {
                double d = e.offset + uni(c.rng, 0.05, 6.0) * (coin(c.rng) ? 1 : -1);
                double t = uni(c.rng, 0.05, 4.0);
                PsiPartials p = psi_partials(e, d, t);
                const double eta = 1e-6;
                double fd = (psi_eval(e, d + eta, t) - psi_eval(e, d - eta, t)) / (2 * eta);
                double ft = (psi_eval(e, d, t + eta) - psi_eval(e, d, t - eta)) / (2 * eta);
                double scale = std::max(1e-3, psi_eval(e, d, t));
                worst = std::max({worst, std::abs(fd - p.dd) / scale, std::abs(ft - p.dt) / scale});
            }
            return c.tol - worst;
        });

    // shooting
    add("shooting.d0_condition", "anchor d0 satisfies (n-1)/2 tanh d0 > psi(d0, 0) and d0 > offset", 0.0, all,
        Needs::Shooting, [](Ctx& c) {
            const ShootCase& s = *c.s;
            double k = s.cfg.n - 1.0;
            return std::min(0.5 * k * std::tanh(s.cfg.d0) - psi_eval(s.env, s.cfg.d0, 0.0), s.cfg.d0 - s.env.offset) +
                   c.tol;
        });
    add("shooting.gamma0_bracket", "gamma0 bracket is tight and classified NotInA below, InA above", 0.0, all,
        Needs::Shooting, [](Ctx& c) {
            const Gamma0Result& g = c.s->g0;
            double cls = (classify(g.trajectory_below) == Membership::NotInA &&
                          classify(g.trajectory_above) == Membership::InA)
                             ? 1.0
                             : -1.0;
            return std::min(cls, c.s->cfg.bisect_tol * (1 + 1e-9) - g.bracket_width) + c.tol;
        });
    add("shooting.cosh_g_monotone", "cosh^{n-1}(d) g is nonincreasing in d", 1e-8, all, Needs::Shooting,
        [](Ctx& c) {
            const ShootCase& s = *c.s;
            double k = s.cfg.n - 1.0, atol = 1e-2 * s.cfg.rk_tol;
            return std::min({cosh_g_slack(s.g0.witness(), k, c.tol, atol),
                             cosh_g_slack(s.g0.trajectory_above, k, c.tol, atol),
                             cosh_g_slack(s.el.forward, k, c.tol, atol), cosh_g_slack(s.rand_fwd, k, c.tol, atol)});
        });
    add("shooting.g_derivative_bound", "|g'| <= (n-1) + sup psi", 1e-9, all, Needs::Shooting, [](Ctx& c) {
        const ShootCase& s = *c.s;
        double bound = (s.cfg.n - 1.0) + psi_sup(s.env);
        double m = kInf;
        for (const Trajectory* tr : {&s.g0.witness(), &s.el.forward, &s.rand_fwd}) {
            const auto& S = tr->samples;
            for (std::size_t i = 0; i + 1 < S.size(); ++i) {
                double dd = S[i + 1].d - S[i].d;
                if (std::abs(dd) < 1e-9) continue;
                m = std::min(m, bound - std::abs((S[i + 1].g - S[i].g) / dd));
            }
        }
        return m + c.tol * bound;
    });
    add("shooting.g_bounds_forward", "min{-1/2, gamma} < g <= max{0, gamma} for d > d0", 1e-12, all,
        Needs::Shooting, [](Ctx& c) {
            const ShootCase& s = *c.s;
            double m = kInf;
            auto check = [&](const Trajectory& tr, double gamma) {
                for (const OdeState& x : tr.samples) {
                    if (x.d <= s.cfg.d0) continue;
                    m = std::min({m, x.g - std::min(-0.5, gamma), std::max(0.0, gamma) - x.g + c.tol});
                }
            };
            check(s.el.forward, s.g0.lower);
            check(s.rand_fwd, s.gamma_rand);
            return m;
        });
    add("shooting.sign_persistence", "once g < 0 it stays negative", 1e-14, all, Needs::Shooting, [](Ctx& c) {
        const ShootCase& s = *c.s;
        double m = kInf;
        for (const Trajectory* tr : {&s.el.forward, &s.rand_fwd}) {
            bool neg = false;
            for (const OdeState& x : tr->samples) {
                if (x.g < 0.0) neg = true;
                if (neg) m = std::min(m, -x.g);
            }
        }
        return std::isinf(m) ? c.tol : m + c.tol;
    });
    add("shooting.g_below_G", "g at gamma0 stays below G = -cosh^{1-n}", 1e-8, all, Needs::Shooting, [](Ctx& c) {
        const ShootCase& s = *c.s;
        double k = s.cfg.n - 1.0;
        return over_samples(s.g0.witness(), [&](const OdeState& x) { return -1.0 / cosh_pow(x.d, k) - x.g; }) + c.tol;
    });
    add("shooting.w_above_W", "w at gamma0 stays above the explicit Scherk W on (d_min, d0]", 1e-8, all,
        Needs::Shooting, [](Ctx& c) {
            const ShootCase& s = *c.s;
            ExplicitScherk E(s.cfg.n, s.cfg.d0, s.h0);
            return over_samples(s.g0.witness(), [&](const OdeState& x) { return x.w - E.W(x.d); }) + c.tol;
        });
    add("shooting.blowup_divergence", "w(d_min) exceeds W(d_min) and grows when eps_g is halved", 0.0, all,
        Needs::Shooting, [](Ctx& c) {
            const ShootCase& s = *c.s;
            ExplicitScherk E(s.cfg.n, s.cfg.d0, s.h0);
            double w = s.g0.witness().samples.back().w, wh = s.g0_half.witness().samples.back().w;
            return std::min(w - E.W(s.g0.d_min()), wh - w) + c.tol;
        });
    add("shooting.integral_residuals", "sampled profiles satisfy the integral forms of w and g", 1e-6, all,
        Needs::Shooting, [](Ctx& c) {
            const ShootCase& s = *c.s;
            return c.tol - std::max({s.res_witness.max_w, s.res_witness.max_g, s.res_forward.max_w,
                                     s.res_forward.max_g});
        });
    add("shooting.ell_sigma", "h - sigma <= l(h) <= h + sigma", 0.0, all, Needs::Shooting, [](Ctx& c) {
        const ShootCase& s = *c.s;
        return s.sig.sigma - std::abs(s.el.value - s.h0) + c.tol;
    });
    add("shooting.solve_height", "|l(h_c) - c| <= max(1e-6, 2 tail) for c in {-3, 0, 3}", 1e-6, all,
        Needs::Shooting, [](Ctx& c) {
            double m = kInf;
            for (const auto& [target, hs] : c.s->solves)
                m = std::min(m, std::max(c.tol, 2.0 * hs.tail) - std::abs(hs.ell_value - target));
            return m;
        });
    add("shooting.w_decreasing_above_c", "solved profiles are decreasing and stay above c", 1e-6, all,
        Needs::Shooting, [](Ctx& c) {
            double m = kInf;
            for (const auto& [target, hs] : c.s->solves) {
                auto prof = full_profile(hs.at_root.g0.witness(), hs.at_root.forward);
                double slack = std::max(c.tol, 2.0 * hs.tail);
                for (std::size_t i = 0; i < prof.size(); ++i) {
                    m = std::min(m, prof[i].w - target + slack);
                    if (i + 1 < prof.size()) m = std::min(m, prof[i].w - prof[i + 1].w);
                }
            }
            return m;
        });
    add("shooting.gamma0_continuity", "gamma0(h) moves by less than tol when h moves by 1e-3", 1e-2, all,
        Needs::Shooting, [](Ctx& c) { return c.tol - std::abs(c.s->g0_dh.gamma0 - c.s->g0.gamma0); });

    // barriers
    add("barriers.super_invariants", "Super profile decreasing, above c, within tail of c, above W at d_min", 1e-6,
        all, Needs::Shooting, [](Ctx& c) {
            const ScherkBarrier& b = *c.s->super_b;
            const auto& y = b.profile.y();
            double m = kInf;
            for (std::size_t i = 0; i + 1 < y.size(); ++i) m = std::min(m, y[i] - y[i + 1]);
            for (double v : y) m = std::min(m, v - b.c);
            m = std::min(m, b.tail - std::abs(b.at(b.d_max) - b.c) + 1e-12);
            m = std::min(m, b.at(b.d_min) - ExplicitScherk(b.n, b.d0, b.h_c).W(b.d_min) + c.tol);
            for (int i = 0; i < 20; ++i) {
                double d = b.d_min * std::pow(b.d_max / b.d_min, uni(c.rng, 0.0, 1.0));
                m = std::min(m, b.at(d) - scherk_lower_bound(b.n, b.c, d) + b.tail + c.tol);
            }
            return m;
        });
    add("barriers.supersolution_residual", "profile residual of the scalar equation is within tol on [2 d_min, d_max]",
        1e-5, all, Needs::Shooting, [](Ctx& c) {
            auto a = supersolution_residual(*c.s->super_b);
            auto b = supersolution_residual(*c.s->sub_b);
            return std::min(a.margin, b.margin) + c.tol;
        });
    add("barriers.sub_below_super", "Sub <= Super where both are defined, equal c", 0.0, all, Needs::Shooting,
        [](Ctx& c) {
            const ScherkBarrier &sp = *c.s->super_b, &sb = *c.s->sub_b;
            double lo = std::max(sp.d_min, sb.d_min), hi = std::min(sp.d_max, sb.d_max);
            double m = kInf;
            for (int i = 0; i <= 400; ++i) {
                double d = lo * std::pow(hi / lo, i / 400.0);
                m = std::min(m, sp.at(d) - sb.at(d));
            }
            return m + c.tol;
        });
    add("barriers.explicit_scherk", "explicit W solves W' = -1/sqrt(cosh^{2n-2} - 1) and G(d0) cosh^{n-1}(d0) = -1",
        1e-7, all, Needs::Envelope, [](Ctx& c) {
            int n = c.s->rc.n;
            double d0 = uni(c.rng, 0.2, 3.0), h = uni(c.rng, -3.0, 3.0);
            ExplicitScherk E(n, d0, h);
            double k = n - 1.0;
            double worst = std::abs(E.G(d0) * cosh_pow(d0, k) + 1.0);
            auto integrand = [k](double s) { return 1.0 / std::sqrt(std::pow(std::cosh(s), 2 * k) - 1.0); };
            for (int i = 0; i < 10; ++i) {
                double d = std::exp(uni(c.rng, std::log(0.01), std::log(10.0)));
                double d2 = d * uni(c.rng, 1.1, 2.0);
                double q = integrate(integrand, d, d2, 1e-12).value;
                double rounding = 1e-14 * std::max(1.0, std::abs(E.W(d)));
                worst = std::max(worst, std::max(0.0, std::abs((E.W(d) - E.W(d2)) - q) - rounding) / q);
                if (n == 2) {
                    double closed = h + std::log(std::tanh(0.5 * d0)) - std::log(std::tanh(0.5 * d));
                    worst = std::max(worst, std::abs(E.W(d) - closed));
                }
            }
            return c.tol - worst;
        });
    add("barriers.eval_monotone", "eval_barrier decreases with signed distance and hits h_c at d0", 1e-12, all,
        Needs::Shooting, [](Ctx& c) {
            const ScherkBarrier& b = *c.s->super_b;
            int n = b.n;
            std::vector<std::pair<double, double>> pts;
            for (int i = 0; i < 200; ++i) {
                Vec x(static_cast<std::size_t>(n));
                for (auto& v : x) v = uni(c.rng, -1.0, 1.0);
                double r = std::sqrt(norm2(x));
                double rad = std::tanh(0.5 * uni(c.rng, 0.0, 12.0));
                for (auto& v : x) v *= rad / r;
                BallPoint p(x);
                double d = signed_wall_distance(p, b.wall);
                if (d < b.d_min) continue;
                pts.emplace_back(d, eval_barrier(b, p));
            }
            std::sort(pts.begin(), pts.end());
            double m = c.tol - std::abs(b.at(b.d0) - b.h_c);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) m = std::min(m, pts[i].second - pts[i + 1].second);
            return m;
        });
    add("barriers.envelope_seams", "envelope of two Super barriers is continuous across the walls", 1e-9, 3,
        Needs::Shooting, [](Ctx& c) {
            int n = c.s->rc.n;
            EnvelopeContext ctx = c.s->rc.context();
            GeodesicWall S1 = wall_concentric_at(BoundaryPoint::normalized([&] {
                                  Vec v(static_cast<std::size_t>(n), 0.0);
                                  v[0] = -1.0;
                                  return v;
                              }()),
                                                 1.0)
                                  .flipped();
            GeodesicWall S2 = wall_concentric_at(BoundaryPoint::axis(n, 0), 1.0).flipped();
            ScherkBarrier b1 = build_super(ctx, S1, 0.0), b2 = build_super(ctx, S2, 0.0);
            double m = kInf;
            for (int which = 0; which < 2; ++which) {
                const GeodesicWall& S = which ? S2 : S1;
                const ScherkBarrier& other = which ? b1 : b2;
                const auto& os = std::get<OrthoSphere>(S.rep());
                for (const BallPoint& y : sample_wall(S, 500, 4.0, 11 + which)) {
                    Vec u(y.coords());
                    for (int i = 0; i < n; ++i) u[i] -= os.center[i];
                    double un = std::sqrt(norm2(u));
                    Vec xp(y.coords()), xm(y.coords());
                    for (int i = 0; i < n; ++i) {
                        xp[i] += 1e-10 * u[i] / un;
                        xm[i] -= 1e-10 * u[i] / un;
                    }
                    BallPoint P(xp), M(xm);
                    double jump = std::abs(envelope_barrier(b1, b2, P) - envelope_barrier(b1, b2, M));
                    double d = signed_wall_distance(y, other.wall);
                    double bound = d >= other.d_min ? other.profile.error_at(d) : 0.0;
                    m = std::min(m, bound + c.tol - jump);
                }
            }
            return m;
        });
    add("barriers.uniform_bound", "sup over d >= 4 of w_{S,c} is finite and above c for offsets in [-5, 5]", 0.0, 3,
        Needs::Shooting, [](Ctx& c) {
            EnvelopeContext ctx = c.s->rc.context();
            double c0 = c0_threshold(ctx);
            std::vector<double> offs;
            for (int i = -5; i <= 5; ++i) offs.push_back(i);
            UniformBoundReport rep = uniform_bound_experiment(ctx, c0, offs, 4.0);
            double m = std::isfinite(rep.M_observed) ? rep.M_observed - c0 : -1.0;
            if (ctx.phi.is_zero() || ctx.h.is_zero()) {
                double lo = kInf, hi = -kInf;
                for (const OffsetSup& o : rep.per_offset) {
                    lo = std::min(lo, o.sup);
                    hi = std::max(hi, o.sup);
                }
                m = std::min(m, 1e-6 - (hi - lo));
            }
            return m + c.tol;
        });
    add("barriers.squeeze", "Super barrier with c + eps converges to c + eps along the ray, within its tail bound",
        1e-9, 3, Needs::Shooting, [](Ctx& c) {
            int n = c.s->rc.n;
            EnvelopeContext ctx = c.s->rc.context();
            Vec v(static_cast<std::size_t>(n));
            for (auto& x : v) x = uni(c.rng, -1.0, 1.0);
            BoundaryPoint p = BoundaryPoint::normalized(v);
            const double t0 = 8.0, eps = 0.1, cc = uni(c.rng, -1.0, 1.0);
            ScherkBarrier b = build_super(ctx, wall_concentric_at(p, t0), cc + eps);
            double m = kInf, prev = kInf;
            for (double t = t0 + 10.0; t <= 27.0; t += 0.5) {
                double d = signed_wall_distance(ray_point(p, t), b.wall);
                double val = b.at(d);
                m = std::min(m, prev - val + c.tol);
                prev = val;
                if (d >= b.d0) m = std::min(m, tail_bound_at(b, d) + b.tail - (val - cc - eps) + c.tol);
            }
            return m;
        });
    add("barriers.radial_barrier", "radial barrier has sup rho~ < 1, v decreasing and v -> M", 1e-9, all,
        Needs::Envelope, [](Ctx& c) {
            int n = c.s->rc.n;
            DecaySpec phi = c.s->rc.phi.is_zero() ? DecaySpec::zero() : random_phi(c.rng, n - 1.0);
            double M = uni(c.rng, -2.0, 2.0);
            RadialBarrier rb = radial_barrier(n, phi, M);
            double m = 1.0 - 1e-9 - rb.sup_rho;
            for (std::size_t i = 0; i + 1 < rb.v.size(); ++i) m = std::min(m, rb.v[i] - rb.v[i + 1]);
            m = std::min(m, rb.tail - (rb.v.back() - M) + c.tol);
            m = std::min(m, rb.v.back() - M + c.tol);
            const double k = n - 1.0;
            for (double r : {1e-3, 0.5, 2.0, 10.0}) {
                double lr = std::log(std::sinh(r));
                auto f = [&](double s) { return phi(s) * std::exp(k * (std::log(std::sinh(s)) - lr)); };
                double q = integrate(f, 0.0, r, 1e-13).value;
                m = std::min(m, 1e-8 * q + 1e-15 - std::abs(rho_tilde(n, phi, r) - q));
            }
            c.note = "phi " + to_json(phi).dump() + ", M " + std::to_string(M);
            return m;
        });
    add("barriers.radial_negative_control", "non-integrable or coth-violating phi is rejected", 0.0, all,
        Needs::Envelope, [](Ctx& c) {
            int n = c.s->rc.n;
            double k = n - 1.0;
            auto kind_of = [&](const DecaySpec& phi) -> std::optional<ErrorKind> {
                try {
                    radial_barrier(n, phi, 0.0);
                } catch (const Error& e) {
                    return e.kind();
                }
                return std::nullopt;
            };
            bool a = kind_of(DecaySpec::inverse_power_unchecked(0.999 * k, 1.0)) == ErrorKind::NonIntegrableTail;
            bool b = kind_of(DecaySpec::sech(3.0 * k, 0.1)) == ErrorKind::CothBoundViolated;
            if (!a) c.note = "non-integrable phi accepted";
            if (!b) c.note += " coth-violating phi accepted";
            return (a && b ? 1.0 : -1.0) + c.tol;
        });

    // radial solver
    add("radial.boundary_value", "Solved profiles have g(0) = 0, |g| < 1 and w(R) = c", 1e-8, all, Needs::Radial,
        [](Ctx& c) {
            const RadialCase& r = *c.r;
            if (r.sol.outcome != RadialOutcome::Solved) {
                c.note = "unexpected gradient blowup";
                return -1.0;
            }
            double m = c.tol - std::abs(r.sol.w_R - r.p.c);
            m = std::min(m, -std::abs(r.sol.samples.front().g));
            for (const RadialSample& s : r.sol.samples) m = std::min(m, 1.0 - std::abs(s.g));
            return m;
        });
    add("radial.flux_identity", "sinh^{n-1}(r) g(r) + integral_0^r f sinh^{n-1} = 0", 1e-6, all, Needs::Radial,
        [](Ctx& c) { return c.tol - flux_residual(c.r->p, c.r->sol); });
    add("radial.monotone_map", "w0 -> w(R) is nondecreasing over the sweep", 1e-12, all, Needs::Radial, [](Ctx& c) {
        double m = c.tol, prev = -kInf;
        for (const SweepPoint& pt : c.r->sol.sweep) {
            if (pt.outcome != RadialOutcome::Solved) continue;
            if (std::isfinite(prev)) m = std::min(m, pt.end_value - prev + c.tol);
            prev = pt.end_value;
        }
        return m;
    });
    add("radial.hemisphere_threshold", "constant f = H blows up exactly when R reaches the hemisphere radius", 1e-3,
        all, Needs::Radial, [](Ctx& c) {
            int n = c.r->p.n;
            double H = (n - 1.0) * uni(c.rng, 1.2, 3.0);
            RadialProblem p;
            p.n = n;
            p.R = 20.0;
            p.c = uni(c.rng, -1.0, 1.0);
            p.f = RadialSource::constant(H);
            c.note = "H " + std::to_string(H) + ", c " + std::to_string(p.c);
            RadialSolution probe = integrate_radial(p, 0.0);
            if (probe.outcome != RadialOutcome::GradientBlowup) return -1.0;
            double rs = probe.r_star;
            double m = 1.0;
            if (n == 2) m = c.tol - std::abs(rs - hemisphere_radius(H));
            p.R = 0.95 * rs;
            RadialSolution below = solve_radial_dirichlet(p);
            if (below.outcome != RadialOutcome::Solved) m = std::min(m, -1.0);
            p.R = 1.02 * rs;
            RadialSolution above = solve_radial_dirichlet(p);
            for (const SweepPoint& pt : above.sweep)
                if (pt.outcome != RadialOutcome::GradientBlowup) m = std::min(m, -1.0);
            if (above.outcome != RadialOutcome::GradientBlowup) m = std::min(m, -1.0);
            return m;
        });
    add("radial.barrier_comparison", "radial solution with f = +phi stays below the radial barrier v", 1e-8, all,
        Needs::Radial, [](Ctx& c) {
            int n = c.r->p.n;
            DecaySpec phi = c.r->p.f.kind == RadialSource::Kind::Constant && c.r->p.f.H == 0.0
                                ? DecaySpec::zero()
                                : random_phi(c.rng, n - 1.0);
            RadialProblem p;
            p.n = n;
            p.R = uni(c.rng, 0.5, 4.0);
            p.c = uni(c.rng, -1.0, 1.0);
            p.f = phi.is_zero() ? RadialSource::constant(0.0) : RadialSource::radial_decay(phi, 1);
            double M = p.c + uni(c.rng, 0.0, 1.0);
            c.note = "phi " + to_json(phi).dump() + ", R " + std::to_string(p.R) + ", c " + std::to_string(p.c) +
                     ", M " + std::to_string(M);
            RadialSolution s = solve_radial_dirichlet(p);
            BarrierComparison cmp = compare_with_barrier(s, radial_barrier(n, phi, M), c.tol);
            return c.tol - cmp.max_excess;
        });

    std::sort(P.begin(), P.end(), [](const Property& a, const Property& b) { return a.info.id < b.info.id; });
    return P;
}

const std::vector<Property>& registry() {
    static const std::vector<Property> R = build_registry();
    return R;
}

const Property* find_property(const std::string& id) {
    for (const Property& p : registry())
        if (p.info.id == id) return &p;
    return nullptr;
}

}  // namespace

const std::vector<PropertyInfo>& property_registry() {
    static const std::vector<PropertyInfo> infos = [] {
        std::vector<PropertyInfo> v;
        for (const Property& p : registry()) v.push_back(p.info);
        return v;
    }();
    return infos;
}

void VerificationPlan::validate() const {
    require(trials >= 1, "plan needs trials >= 1");
    require(!dims.empty(), "plan needs at least one dimension");
    for (int n : dims) require(n >= 2 && n <= 8, "plan dimensions must lie in {2, ..., 8}");
    require(threads >= 0, "threads must be >= 0");
    for (const std::string& id : properties)
        require(find_property(id) != nullptr, "property '" + id + "' has no registry entry");
    for (const auto& [id, tol] : tolerance) {
        require(find_property(id) != nullptr, "tolerance override for unregistered property '" + id + "'");
        require(std::isfinite(tol) && tol >= 0.0, "tolerance override must be finite and >= 0");
    }
}

VerificationPlan default_plan() { return VerificationPlan{}; }

VerificationPlan plan_from_json(const json& j) {
    require(j.is_object(), "plan must be a JSON object");
    static const std::set<std::string> keys{"format_version", "seed",       "trials", "dims",
                                            "generator",      "tolerances", "properties", "threads"};
    for (auto it = j.begin(); it != j.end(); ++it)
        require(keys.count(it.key()) > 0, "unknown key '" + it.key() + "' in plan");
    VerificationPlan p;
    try {
        if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("trials")) p.trials = j.at("trials").get<int>();
        if (j.contains("dims")) p.dims = j.at("dims").get<std::vector<int>>();
        if (j.contains("threads")) p.threads = j.at("threads").get<int>();
        if (j.contains("generator")) {
            std::string g = j.at("generator").get<std::string>();
            require(g == "random" || g == "zero", "generator must be 'random' or 'zero'");
            p.generator = g == "zero" ? Generator::Zero : Generator::Random;
        }
        if (j.contains("tolerances")) p.tolerance = j.at("tolerances").get<std::map<std::string, double>>();
        if (j.contains("properties")) p.properties = j.at("properties").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        fail(ErrorKind::Validation, std::string("malformed plan: ") + e.what());
    }
    p.validate();
    return p;
}

VerificationPlan load_plan(const std::string& spec) {
    if (spec == "default") return default_plan();
    if (spec == "zero") {
        VerificationPlan p;
        p.generator = Generator::Zero;
        return p;
    }
    json j;
    try {
        j = json::parse(read_file(spec));
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Validation, "plan " + spec + " is not valid JSON: " + e.what());
    }
    return plan_from_json(j);
}

VerificationReport run_plan(const VerificationPlan& plan) {
    plan.validate();
    std::vector<const Property*> props;
    if (plan.properties.empty()) {
        for (const Property& p : registry()) props.push_back(&p);
    } else {
        std::set<std::string> want(plan.properties.begin(), plan.properties.end());
        for (const Property& p : registry())
            if (want.count(p.info.id)) props.push_back(&p);
    }
    bool need_shoot = false, need_radial = false;
    for (const Property* p : props) {
        need_shoot |= p->needs != Needs::Radial;
        need_radial |= p->needs == Needs::Radial;
    }

    struct Outcome {
        double margin;
        std::string message;
        json replay;
    };
    const std::size_t D = plan.dims.size(), T = static_cast<std::size_t>(plan.trials), NP = props.size();
    std::vector<std::optional<Outcome>> out(D * T * NP);

    auto work = [&](std::size_t task) {
        std::size_t di = task / T, ti = task % T;
        int n = plan.dims[di], trial = static_cast<int>(ti);
        std::optional<ShootCase> sc;
        std::optional<RadialCase> rc;
        if (need_shoot) sc = make_shoot_case(plan, n, trial);
        if (need_radial) rc = make_radial_case(plan, n, trial);
        for (std::size_t pi = 0; pi < NP; ++pi) {
            const Property& p = *props[pi];
            if (trial >= p.info.max_trials) continue;
            auto tol_it = plan.tolerance.find(p.info.id);
            Ctx ctx{sc ? &*sc : nullptr, rc ? &*rc : nullptr,
                    make_rng(plan.seed, fnv1a(p.info.id), n, trial),
                    tol_it != plan.tolerance.end() ? tol_it->second : p.info.tolerance, {}};
            Outcome o{0.0, {}, p.needs == Needs::Radial ? rc->replay : sc->replay};
            const std::optional<std::string>& err = p.needs == Needs::Radial ? rc->error : sc->error;
            if (p.needs != Needs::Envelope && err) {
                o.margin = -kInf;
                o.message = *err;
            } else {
                try {
                    o.margin = p.check(ctx);
                    o.message = ctx.note;
                    if (std::isnan(o.margin)) {
                        o.margin = -kInf;
                        o.message = "NaN margin";
                    }
                } catch (const std::exception& e) {
                    o.margin = -kInf;
                    o.message = e.what();
                }
            }
            out[task * NP + pi] = std::move(o);
        }
    };

    const std::size_t tasks = D * T;
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t nthreads = std::min<std::size_t>(tasks, plan.threads > 0 ? static_cast<std::size_t>(plan.threads) : hw);
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;) work(t);
    };
    if (nthreads <= 1) {
        loop();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(loop);
        for (auto& th : pool) th.join();
    }

    VerificationReport rep{plan.seed, {}, true};
    for (std::size_t pi = 0; pi < NP; ++pi) {
        for (std::size_t di = 0; di < D; ++di) {
            PropertyReport pr{props[pi]->info.id, props[pi]->info.anchor, plan.dims[di], 0, 0, kInf, {}};
            for (std::size_t ti = 0; ti < T; ++ti) {
                const auto& o = out[(di * T + ti) * NP + pi];
                if (!o) continue;
                ++pr.trials;
                pr.worst_margin = std::min(pr.worst_margin, o->margin);
                if (!(o->margin >= 0.0)) {
                    ++pr.failures;
                    pr.failed.push_back({static_cast<int>(ti), o->margin, o->message, o->replay});
                }
            }
            if (pr.failures) rep.pass = false;
            rep.properties.push_back(std::move(pr));
        }
    }
    return rep;
}

json to_json(const VerificationReport& r) {
    json props = json::array();
    for (const PropertyReport& p : r.properties) {
        json failed = json::array();
        for (const PropertyFailure& f : p.failed)
            failed.push_back({{"trial", f.trial},
                              {"margin", std::isfinite(f.margin) ? json(f.margin) : json(nullptr)},
                              {"message", f.message},
                              {"replay", f.replay}});
        props.push_back({{"id", p.id},
                         {"anchor", p.anchor},
                         {"n", p.n},
                         {"trials", p.trials},
                         {"failures", p.failures},
                         {"worst_margin", std::isfinite(p.worst_margin) ? json(p.worst_margin) : json(nullptr)},
                         {"failed", failed}});
    }
    return {{"format_version", kFormatVersion}, {"seed", r.seed}, {"pass", r.pass}, {"properties", props}};
}

}  // namespace scherk

#include "scherk/radial_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "scherk/errors.hpp"
#include "scherk/ode.hpp"
#include "scherk/quadrature.hpp"

namespace scherk {

RadialSource RadialSource::constant(double H) {
    RadialSource s;
    s.kind = Kind::Constant;
    s.H = H;
    s.validate();
    return s;
}

RadialSource RadialSource::radial_decay(DecaySpec phi, int sign) {
    RadialSource s;
    s.kind = Kind::RadialDecay;
    s.phi = phi;
    s.sign = sign;
    s.validate();
    return s;
}

RadialSource RadialSource::separable(DecaySpec phi, HeightSpec h, int sign) {
    RadialSource s;
    s.kind = Kind::SeparableMonotone;
    s.phi = phi;
    s.h = h;
    s.sign = sign;
    s.validate();
    return s;
}

double RadialSource::operator()(double r, double t) const {
    switch (kind) {
        case Kind::Constant: return H;
        case Kind::RadialDecay: return sign * phi(r);
        case Kind::SeparableMonotone:
            return sign > 0 ? phi(r) * h(std::max(t, 0.0)) : -phi(r) * h(std::min(t, 0.0));
    }
    return 0.0;
}

void RadialSource::validate() const {
    require(sign == 1 || sign == -1, "source sign must be +1 or -1");
    switch (kind) {
        case Kind::Constant: require(std::isfinite(H), "constant source must be finite"); break;
        case Kind::RadialDecay: phi.validate(); break;
        case Kind::SeparableMonotone:
            phi.validate();
            h.validate();
            break;
    }
}

void RadialProblem::validate() const {
    require(n >= 2 && n <= 64, "dimension n must be in [2, 64]");
    require(R > 0.0 && std::isfinite(R), "ball radius R must be positive");
    require(std::isfinite(c), "boundary value c must be finite");
    require(opt.rk_tol > 0.0 && opt.rk_tol < 1e-3, "rk_tol must be in (0, 1e-3)");
    require(opt.eps_g > 0.0 && opt.eps_g < 1e-2, "eps_g must be in (0, 1e-2)");
    require(opt.r_eps > 0.0 && opt.r_eps < R, "r_eps must be in (0, R)");
    require(opt.solve_tol > 0.0, "solve_tol must be positive");
    f.validate();
}

const char* to_string(RadialOutcome o) noexcept {
    return o == RadialOutcome::Solved ? "Solved" : "GradientBlowup";
}

double hemisphere_radius(double H) {
    if (std::abs(H) <= 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::atanh(1.0 / std::abs(H));
}

RadialSolution integrate_radial(const RadialProblem& p, double w0) {
    p.validate();
    require(std::isfinite(w0), "center value must be finite");
    const double k = p.n - 1.0;
    const double lim = 1.0 - p.opt.eps_g;
    using S = std::array<double, 2>;  // (w, g)
    auto rhs = [&](double r, const S& y) {
        double q = (1.0 - y[1]) * (1.0 + y[1]);
        return S{y[1] / std::sqrt(q), -p.f(r, y[0]) - k * y[1] / std::tanh(r)};
    };

    RadialSolution sol;
    sol.center_value = w0;
    sol.samples.push_back({0.0, w0, 0.0});
    // regular singular point: g ~ -f(0, w0) r / n, w ~ w0 - f(0, w0) r^2 / (2n)
    const double r0 = p.opt.r_eps, f0 = p.f(0.0, w0);
    S y0{w0 - f0 * r0 * r0 / (2.0 * p.n), -f0 * r0 / p.n};
    if (!(std::abs(y0[1]) < lim)) fail(ErrorKind::NearSingularity, "source too large at the center");
    sol.samples.push_back({r0, y0[0], y0[1]});

    Dopri5Options opt;
    opt.rtol = p.opt.rk_tol;
    opt.atol = 1e-2 * p.opt.rk_tol;
    opt.h_init = r0;
    opt.h_max = std::max(1e-3, p.R / 200.0);
    auto ode = make_dopri5<2>(rhs, r0, y0, opt);
    for (;;) {
        double left = p.R - ode.t();
        if (left <= 1e-14 * std::max(1.0, p.R)) break;
        ode.limit_next_step(left);
        ode.step();
        const S& y = ode.y();
        if (!(std::abs(y[1]) < lim)) {
            auto ev = [&](double r) { return lim - std::abs(ode.dense(r)[1]); };
            double ga = lim - std::abs(ode.y_prev()[1]);
            double r_e = locate_root(ev, ode.t_prev(), ode.t(), ga, ev(ode.t()));
            S ye = ode.dense(r_e);
            sol.samples.push_back({r_e, ye[0], ye[1]});
            // linear extrapolation of |g| to 1 from the event point
            double slope = std::abs(rhs(r_e, ye)[1]);
            sol.outcome = RadialOutcome::GradientBlowup;
            sol.r_star = slope > 0.0 ? r_e + p.opt.eps_g / slope : r_e;
            sol.w_R = ye[0];
            sol.steps = ode.steps();
            return sol;
        }
        sol.samples.push_back({ode.t(), y[0], y[1]});
    }
    sol.samples.back().r = p.R;
    sol.outcome = RadialOutcome::Solved;
    sol.w_R = sol.samples.back().w;
    sol.steps = ode.steps();
    return sol;
}

RadialSolution solve_radial_dirichlet(const RadialProblem& p) {
    p.validate();
    std::map<double, SweepPoint> seen;
    auto shoot = [&](double w0) {
        RadialSolution s = integrate_radial(p, w0);
        seen[w0] = SweepPoint{w0, s.outcome, s.w_R, s.samples.back().r};
        return s;
    };
    auto finish = [&](RadialSolution s) {
        for (auto& [w0, pt] : seen) s.sweep.push_back(pt);
        double prev = -std::numeric_limits<double>::infinity();
        for (const SweepPoint& pt : s.sweep) {
            if (pt.outcome != RadialOutcome::Solved) continue;
            if (pt.end_value < prev) s.monotone_map = false;
            prev = pt.end_value;
        }
        return s;
    };

    // expanding symmetric sweep around c until a solved pair brackets c
    std::optional<double> lo, hi;
    std::optional<RadialSolution> first_blowup;
    auto consider = [&](double w0) -> std::optional<RadialSolution> {
        RadialSolution s = shoot(w0);
        if (s.outcome == RadialOutcome::GradientBlowup) {
            if (!first_blowup) first_blowup = s;
            return std::nullopt;
        }
        double F = s.w_R - p.c;
        if (std::abs(F) <= p.opt.solve_tol) return s;
        if (F < 0.0 && (!lo || w0 > *lo)) lo = w0;
        if (F > 0.0 && (!hi || w0 < *hi)) hi = w0;
        return std::nullopt;
    };
    if (auto s = consider(p.c)) return finish(std::move(*s));
    for (int j = 0; j <= 20 && !(lo && hi); ++j) {
        double s = std::ldexp(1.0, j);
        if (auto r = consider(p.c - s)) return finish(std::move(*r));
        if (auto r = consider(p.c + s)) return finish(std::move(*r));
    }
    if (!(lo && hi)) {
        bool any_solved = std::any_of(seen.begin(), seen.end(),
                                      [](const auto& kv) { return kv.second.outcome == RadialOutcome::Solved; });
        if (!any_solved && first_blowup) return finish(std::move(*first_blowup));
        fail(ErrorKind::NoBracket, "center-value sweep does not bracket the boundary value");
    }

    // Illinois regula falsi on F(w0) = w(R; w0) - c
    double a = *lo, b = *hi;
    double fa = seen[a].end_value - p.c, fb = seen[b].end_value - p.c;
    int side = 0;
    RadialSolution best;
    for (int it = 0; it < 200; ++it) {
        double m = (fa * b - fb * a) / (fa - fb);
        if (!(m > std::min(a, b) && m < std::max(a, b))) m = 0.5 * (a + b);
        best = shoot(m);
        if (best.outcome != RadialOutcome::Solved)
            fail(ErrorKind::NoBracket, "gradient blowup inside the center-value bracket");
        double fm = best.w_R - p.c;
        if (std::abs(fm) <= p.opt.solve_tol || std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(m))) break;
        if ((fm < 0.0) == (fa < 0.0)) {
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
    return finish(std::move(best));
}

double flux_residual(const RadialProblem& p, const RadialSolution& s) {
    const double k = p.n - 1.0;
    const auto& S = s.samples;
    auto lsinh = [](double t) {
        return t > 1.0 ? t + std::log1p(-std::exp(-2.0 * t)) - std::log(2.0) : std::log(std::sinh(t));
    };
    // w between samples: cubic Hermite with the exact slopes
    auto w_at = [&](std::size_t i, double r) {
        const RadialSample &A = S[i], &B = S[i + 1];
        double h = B.r - A.r, t = (r - A.r) / h;
        double ma = A.g / std::sqrt((1 - A.g) * (1 + A.g)), mb = B.g / std::sqrt((1 - B.g) * (1 + B.g));
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * A.w + (t3 - 2 * t2 + t) * h * ma + (-2 * t3 + 3 * t2) * B.w +
               (t3 - t2) * h * mb;
    };
    double worst = 0.0;
    double acc = 0.0;  // integral_0^{r_i} f sinh^k / sinh^k(r_i)
    for (std::size_t i = 0; i + 1 < S.size(); ++i) {
        double a = S[i].r, b = S[i + 1].r;
        double lb = lsinh(b);
        auto f = [&](double r) { return p.f(r, w_at(i, r)) * std::exp(k * (lsinh(r) - lb)); };
        double piece = integrate(f, a, b, 1e-12, 8).value;
        acc = (a > 0.0 ? acc * std::exp(k * (lsinh(a) - lb)) : 0.0) + piece;
        worst = std::max(worst, std::abs(S[i + 1].g + acc));
    }
    return worst;
}

BarrierComparison compare_with_barrier(const RadialSolution& s, const RadialBarrier& v, double tol) {
    BarrierComparison out{-std::numeric_limits<double>::infinity(), 0.0, true};
    for (const RadialSample& x : s.samples) {
        double e = x.w - v.eval(x.r);
        if (e > out.max_excess) {
            out.max_excess = e;
            out.r_worst = x.r;
        }
    }
    out.below = out.max_excess <= tol;
    return out;
}

BarrierComparison compare_with_radial_barrier(const RadialProblem& p, double M) {
    p.validate();
    require(p.f.kind == RadialSource::Kind::RadialDecay, "barrier comparison needs a RadialDecay source");
    require(M >= p.c, "barrier comparison needs M >= c");
    RadialSolution s = solve_radial_dirichlet(p);
    require(s.outcome == RadialOutcome::Solved, "radial problem has no solution to compare");
    return compare_with_barrier(s, radial_barrier(p.n, p.f.phi, M));
}

}  // namespace scherk

#include "scherk/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "scherk/errors.hpp"
#include "scherk/ode.hpp"
#include "scherk/quadrature.hpp"

namespace scherk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log cosh t, accurate near 0
double log_cosh(double t) {
    t = std::abs(t);
    if (t > 1.0) return t + std::log1p(std::exp(-2.0 * t)) - std::log(2.0);
    double s = std::sinh(0.5 * t);
    return std::log1p(2.0 * s * s);
}

double log_sinh(double t) {
    if (t > 1.0) return t + std::log1p(-std::exp(-2.0 * t)) - std::log(2.0);
    return std::log(std::sinh(t));
}

// 1/sqrt(cosh^{2k}(t) - 1) without cancellation or overflow
double scherk_integrand(double k, double t) {
    double L = k * log_cosh(t);
    return std::exp(-L) / std::sqrt(-std::expm1(-2.0 * L));
}

}  // namespace

// ---------------------------------------------------------------- explicit Scherk

double scherk_integral(int n, double a, double b) {
    if (!(a > 0.0)) fail(ErrorKind::DomainError, "Scherk integral needs a > 0");
    require(b >= a, "Scherk integral needs b >= a");
    const double k = n - 1.0;
    // far tail: integrand <= 2^k e^{-kt} / sqrt(1 - cosh^{-2k}(D))
    const double D = std::max(a, 40.0);
    double tail = 0.0;
    if (b > D) {
        double upper = std::isinf(b) ? 0.0 : std::exp(-k * (b - D));
        tail = std::pow(2.0, k) * std::exp(-k * D) * (1.0 - upper) / k /
               std::sqrt(-std::expm1(-2.0 * k * log_cosh(D)));
        b = D;
    }
    if (b <= a) return tail;
    // t = e^u removes the 1/t behaviour at the origin
    auto f = [k](double u) {
        double t = std::exp(u);
        return scherk_integrand(k, t) * t;
    };
    return integrate(f, std::log(a), std::log(b), 1e-14).value + tail;
}

double scherk_lower_bound(int n, double c, double d) { return c + scherk_integral(n, d, kInf); }

ExplicitScherk::ExplicitScherk(int n, double d0, double h) : n_(n), d0_(d0), h_(h) {
    require(n >= 2 && n <= 64, "dimension n must be in [2, 64]");
    if (!(d0 > 0.0) || !std::isfinite(d0)) fail(ErrorKind::DomainError, "explicit Scherk needs d0 > 0");
    require(std::isfinite(h), "explicit Scherk needs finite h");
}

ExplicitScherk explicit_scherk(int n, double d0, double h) { return ExplicitScherk(n, d0, h); }

double ExplicitScherk::G(double d) const {
    if (!(d > 0.0)) fail(ErrorKind::DomainError, "explicit Scherk G needs d > 0");
    return -std::exp(-(n_ - 1.0) * log_cosh(d));
}

double ExplicitScherk::W(double d) const {
    if (!(d > 0.0)) fail(ErrorKind::DomainError, "explicit Scherk W needs d > 0");
    if (d <= d0_) return h_ + scherk_integral(n_, d, d0_);
    return h_ - scherk_integral(n_, d0_, d);
}

double ExplicitScherk::divergence_rate() const { return 1.0 / std::sqrt(n_ - 1.0); }

// ---------------------------------------------------------------- MonotoneProfile

MonotoneProfile::MonotoneProfile(std::vector<double> x, std::vector<double> y, std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(slopes)) {
    require(x_.size() >= 2 && y_.size() == x_.size() && m_.size() == x_.size(),
            "monotone profile needs >= 2 nodes with matching values and slopes");
    const std::size_t N = x_.size();
    int dir = 0;
    for (std::size_t i = 0; i + 1 < N; ++i) {
        require(x_[i + 1] > x_[i], "monotone profile abscissae must be strictly increasing");
        double dy = y_[i + 1] - y_[i];
        int s = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
        if (s != 0) {
            require(dir == 0 || dir == s, "monotone profile values are not monotone");
            dir = s;
        }
    }
    err_.resize(N - 1);
    for (std::size_t i = 0; i + 1 < N; ++i) {
        double h = x_[i + 1] - x_[i];
        double delta = (y_[i + 1] - y_[i]) / h;
        if (delta == 0.0) {
            m_[i] = m_[i + 1] = 0.0;
        } else {
            if (m_[i] / delta < 0.0) m_[i] = 0.0;
            if (m_[i + 1] / delta < 0.0) m_[i + 1] = 0.0;
            double a = m_[i] / delta, b = m_[i + 1] / delta;
            double r = a * a + b * b;
            if (r > 9.0) {
                double tau = 3.0 / std::sqrt(r);
                m_[i] = tau * a * delta;
                m_[i + 1] = tau * b * delta;
            }
        }
        // both the data and the interpolant are monotone between the two node values
        err_[i] = std::abs(y_[i + 1] - y_[i]);
    }
}

std::size_t MonotoneProfile::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double MonotoneProfile::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    std::size_t i = segment(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    if (t == 0.0) return y_[i];
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

double MonotoneProfile::error_at(double x) const { return err_[segment(x)]; }

// ---------------------------------------------------------------- Scherk barriers

const char* to_string(BarrierKind k) noexcept { return k == BarrierKind::Super ? "Super" : "Sub"; }

double ScherkBarrier::at(double d) const {
    if (!(d >= d_min)) throw TooCloseToWall(d, d_min);
    return profile(d);
}

namespace {

// Super barrier for constant c with envelope env; the profile is multiplied by `sign`.
ScherkBarrier build(const EnvelopeContext& ctx, const GeodesicWall& wall, double c, const PsiEnvelope& env,
                    BarrierKind kind) {
    require(std::isfinite(c), "asymptotic constant c must be finite");
    require(wall.dim() == ctx.n, "wall dimension does not match n");
    ctx.solver.validate();
    ShootingConfig cfg = make_config(env, ctx.solver);
    SigmaResult sig = sigma_bound(env, cfg);
    HeightSolve hs = solve_height(env, cfg, c, sig);
    double miss = hs.ell_value - c;
    if (miss <= 0.0) {
        // keep l > c so the profile stays strictly above c
        double tol = 1e-2 * std::max(1e-6, 2.0 * hs.tail);
        hs = solve_height(env, cfg, c - miss + 2.0 * tol, sig);
        miss = hs.ell_value - c;
        if (miss <= 0.0) fail(ErrorKind::NotFound, "could not place l(h) above c");
    }

    const double sign = kind == BarrierKind::Super ? 1.0 : -1.0;
    ScherkBarrier b{wall, sign * c, kind, ctx.n, env, cfg, {}, {}, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    b.samples = full_profile(hs.at_root.g0.witness(), hs.at_root.forward);

    std::vector<double> x, y, m;
    x.reserve(b.samples.size());
    for (const OdeState& s : b.samples) {
        if (!x.empty() && s.d <= x.back()) continue;
        x.push_back(s.d);
        y.push_back(sign * s.w);
        double q = std::sqrt((1.0 - s.g) * (1.0 + s.g));
        m.push_back(sign * s.g / q);
    }
    b.profile = MonotoneProfile(std::move(x), std::move(y), std::move(m));
    b.d_min = b.profile.x_min();
    b.d_max = b.profile.x_max();
    b.d0 = cfg.d0;
    b.h_c = sign * hs.h_c;
    b.gamma0 = hs.gamma0;
    b.ell_value = sign * hs.ell_value;
    b.tail = hs.tail + std::abs(miss);
    b.sigma = hs.sigma;
    return b;
}

}  // namespace

ScherkBarrier build_super(const EnvelopeContext& ctx, const GeodesicWall& wall, double c) {
    double delta = signed_wall_distance(BallPoint::origin(ctx.n), wall);
    return build(ctx, wall, c, ctx.envelope(delta), BarrierKind::Super);
}

ScherkBarrier build_sub(const EnvelopeContext& ctx, const GeodesicWall& wall, double c) {
    double delta = signed_wall_distance(BallPoint::origin(ctx.n), wall);
    // reflected majorant psi(d, -t): psi is constant for t <= 0, so this is the t-frozen envelope
    return build(ctx, wall, -c, ctx.envelope(delta).frozen(), BarrierKind::Sub);
}

double eval_barrier(const ScherkBarrier& b, const BallPoint& x) {
    return b.at(signed_wall_distance(x, b.wall));
}

std::vector<BallPoint> sample_wall(const GeodesicWall& S, int count, double R, unsigned long long seed) {
    require(count > 0 && R > 0.0, "sample_wall needs count > 0 and R > 0");
    const int n = S.dim();
    Vec axis(static_cast<std::size_t>(n));
    Vec foot(static_cast<std::size_t>(n), 0.0);
    if (const auto* hp = std::get_if<HyperplaneThroughOrigin>(&S.rep())) {
        double nn = std::sqrt(norm2(hp->normal));
        for (int i = 0; i < n; ++i) axis[i] = hp->normal[i] / nn;
    } else {
        const auto& os = std::get<OrthoSphere>(S.rep());
        double cn = std::sqrt(norm2(os.center));
        for (int i = 0; i < n; ++i) {
            axis[i] = os.center[i] / cn;
            foot[i] = (cn - os.radius) * axis[i];
        }
    }
    BallPoint a(foot);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, R);
    std::vector<BallPoint> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        Vec y(static_cast<std::size_t>(n));
        for (auto& v : y) v = gauss(rng);
        double pr = dot(y, axis);
        for (int i = 0; i < n; ++i) y[i] -= pr * axis[i];
        double yn = std::sqrt(norm2(y));
        if (yn < 1e-8) continue;
        double rad = std::tanh(0.5 * unif(rng));
        for (auto& v : y) v *= rad / yn;
        out.push_back(mobius_add(a, BallPoint(y)));
    }
    return out;
}

void check_wall_arrangement(const GeodesicWall& s1, const GeodesicWall& s2) {
    require(s1.dim() == s2.dim(), "walls of different dimension");
    for (const BallPoint& x : sample_wall(s1, 64, 8.0)) {
        if (!(signed_wall_distance(x, s2) > 0.0))
            fail(ErrorKind::ConfigurationError, "first wall is not contained in the second barrier's domain");
    }
    for (const BallPoint& x : sample_wall(s2, 64, 8.0)) {
        if (!(signed_wall_distance(x, s1) > 0.0))
            fail(ErrorKind::ConfigurationError, "second wall is not contained in the first barrier's domain");
    }
}

double envelope_barrier(const ScherkBarrier& b1, const ScherkBarrier& b2, const BallPoint& x) {
    if (b1.kind != b2.kind) fail(ErrorKind::ConfigurationError, "envelope of a Super and a Sub barrier");
    check_wall_arrangement(b1.wall, b2.wall);
    const bool super = b1.kind == BarrierKind::Super;
    const double far = super ? kInf : -kInf;
    double d1 = signed_wall_distance(x, b1.wall);
    double d2 = signed_wall_distance(x, b2.wall);
    bool in1 = d1 > 0.0, in2 = d2 > 0.0;
    if (!in1 && !in2) fail(ErrorKind::DomainError, "point lies outside both barrier domains");
    auto value = [&](const ScherkBarrier& b, double d) { return d >= b.d_min ? b.profile(d) : far; };
    if (in1 && !in2) return value(b1, d1);
    if (in2 && !in1) return value(b2, d2);
    double v1 = value(b1, d1), v2 = value(b2, d2);
    return super ? std::min(v1, v2) : std::max(v1, v2);
}

SupersolutionCheck supersolution_residual(const ScherkBarrier& b) {
    SupersolutionCheck out{kInf, 0.0, 2.0 * b.d_min, {}, {}};
    const auto& s = b.samples;
    const std::size_t N = s.size();
    require(N >= 5, "too few samples for a residual check");
    const double k = b.n - 1.0;
    for (std::size_t j = 0; j < N; ++j) {
        if (s[j].d < out.d_from) continue;
        std::size_t lo = j >= 2 ? j - 2 : 0;
        lo = std::min(lo, N - 5);
        // derivative of the 5-point Lagrange interpolant of g at d_j
        double gp = 0.0;
        for (std::size_t i = lo; i < lo + 5; ++i) {
            double w;
            if (i == j) {
                w = 0.0;
                for (std::size_t m = lo; m < lo + 5; ++m)
                    if (m != j) w += 1.0 / (s[j].d - s[m].d);
            } else {
                double num = 1.0, den = 1.0;
                for (std::size_t m = lo; m < lo + 5; ++m) {
                    if (m == i) continue;
                    den *= s[i].d - s[m].d;
                    if (m != j) num *= s[j].d - s[m].d;
                }
                w = num / den;
            }
            gp += w * s[i].g;
        }
        double psi = psi_eval(b.env, s[j].d, s[j].w);
        double r = gp + k * std::tanh(s[j].d) * s[j].g + psi;
        out.d.push_back(s[j].d);
        out.residual.push_back(r);
        out.max_residual = std::max(out.max_residual, std::abs(r));
        out.margin = std::min(out.margin, -r);
    }
    return out;
}

// ---------------------------------------------------------------- radial barrier

namespace {

constexpr double kRadialSeries = 1e-4;

// integral of phi(s) (sinh s / sinh r)^k over [a, r]
double rho_piece(double k, const DecaySpec& phi, double a, double r) {
    if (r <= a) return 0.0;
    double lr = log_sinh(r);
    auto f = [&](double s) { return phi(s) * std::exp(k * (log_sinh(s) - lr)); };
    return integrate(f, a, r, 1e-13).value;
}

double rho_series(int n, const DecaySpec& phi, double r) { return phi(0.0) * r / n; }

}  // namespace

double rho_tilde(int n, const DecaySpec& phi, double r) {
    require(n >= 2, "dimension n must be >= 2");
    r = std::abs(r);
    if (phi.is_zero() || r == 0.0) return 0.0;
    if (r < kRadialSeries) return rho_series(n, phi, r);
    const double k = n - 1.0;
    double base = rho_series(n, phi, kRadialSeries) * std::exp(k * (log_sinh(kRadialSeries) - log_sinh(r)));
    return base + rho_piece(k, phi, kRadialSeries, r);
}

double RadialBarrier::eval(double radius) const {
    radius = std::abs(radius);
    if (radius >= r_max) return v.back();
    return v_profile(radius);
}

RadialBarrier radial_barrier(int n, const DecaySpec& phi, double M) {
    require(n >= 2 && n <= 64, "dimension n must be in [2, 64]");
    require(std::isfinite(M), "M must be finite");
    if (!check_coth_global_bound(phi, n))
        fail(ErrorKind::CothBoundViolated, "phi(r) <= (n-1) coth r fails for n = " + std::to_string(n));
    const double k = n - 1.0;
    RadialBarrier rb{n, phi, M, {}, {}, {}, kRadialSeries, 60.0, 0.0, 0.0, {}};
    const double R = rb.r_max;
    // integrability first: beyond R, rho~ <= rho~(R) + phi(R)/k and its integral is at most (rho~(R) + int_R^inf phi)/k
    double phi_tail = phi.tail(R);
    if (!std::isfinite(phi_tail)) fail(ErrorKind::NonIntegrableTail, "integral of phi diverges, so v is unbounded");

    std::vector<double>& r = rb.r;
    r.push_back(0.0);
    for (int i = 0; i <= 40; ++i) r.push_back(kRadialSeries * std::pow(1.0 / kRadialSeries, i / 40.0));
    for (int i = 1; 1.0 + 0.05 * i < R + 1e-9; ++i) r.push_back(1.0 + 0.05 * i);
    r.back() = R;
    const std::size_t N = r.size();

    auto slope = [](double p) { return p / std::sqrt((1.0 - p) * (1.0 + p)); };
    std::vector<double>& rho = rb.rho_tilde;
    std::vector<double> V(N, 0.0);  // integral_0^r of rho~/sqrt(1 - rho~^2)
    rho.assign(N, 0.0);
    if (!phi.is_zero()) {
        // rho~' = phi - k coth(r) rho~ from the series value at r_min
        auto f = [&](double t, const std::array<double, 2>& y) {
            if (!(std::abs(y[0]) < 1.0)) fail(ErrorKind::NonIntegrableTail, "rho~ reached 1");
            return std::array<double, 2>{phi(t) - k * y[0] / std::tanh(t), slope(y[0])};
        };
        Dopri5Options opt;
        opt.rtol = 1e-12;
        opt.atol = 1e-15;
        opt.h_init = 1e-6;
        opt.h_max = 0.05;
        double r1 = r[1];
        double p1 = rho_series(n, phi, r1);
        auto ode = make_dopri5<2>(f, r1, {p1, phi(0.0) * r1 * r1 / (2.0 * n)}, opt);
        rho[1] = p1;
        V[1] = ode.y()[1];
        std::size_t next = 2;
        while (next < N) {
            ode.limit_next_step(r[N - 1] - ode.t() + 1e-12);
            ode.step();
            while (next < N && r[next] <= ode.t()) {
                auto y = ode.dense(r[next]);
                rho[next] = y[0];
                V[next] = y[1];
                ++next;
            }
            if (next < N && ode.t() >= r[N - 1]) {
                rho[N - 1] = ode.y()[0];
                V[N - 1] = ode.y()[1];
                next = N;
            }
        }
    }
    for (std::size_t i = 0; i < N; ++i) rb.sup_rho = std::max(rb.sup_rho, std::abs(rho[i]));
    double rho_far = rho[N - 1] + phi(R) / k;
    rb.sup_rho = std::max(rb.sup_rho, std::min(rho_far, 1.0));
    if (rb.sup_rho >= 1.0 - 1e-9)
        fail(ErrorKind::NonIntegrableTail, "sup rho~ = " + std::to_string(rb.sup_rho) + " reaches 1");
    rb.tail = (rho[N - 1] + phi_tail) / k / std::sqrt((1.0 - rho_far) * (1.0 + rho_far));

    std::vector<double>& v = rb.v;
    v.resize(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = M + rb.tail + (V[N - 1] - V[i]);
    std::vector<double> m(N);
    for (std::size_t i = 0; i < N; ++i) m[i] = -slope(rho[i]);
    rb.v_profile = MonotoneProfile(r, v, m);
    return rb;
}

// ---------------------------------------------------------------- uniform bound

double c0_threshold(const EnvelopeContext& ctx) {
    const double thr = std::pow(2.0, -(ctx.n + 1.0));
    PsiEnvelope env = ctx.envelope(0.0);
    auto Psi = [&](double t) { return psi_eval(env, 0.0, t); };
    if (Psi(0.0) <= thr) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (Psi(hi) > thr) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e8) fail(ErrorKind::NotFound, "Psi(0, t) does not fall below 2^-(n+1)");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (Psi(mid) > thr ? lo : hi) = mid;
    }
    return hi;
}

GeodesicWall wall_at_offset(int n, double delta) {
    require(std::isfinite(delta), "offset must be finite");
    BoundaryPoint e1 = BoundaryPoint::axis(n, 0);
    if (delta == 0.0) return GeodesicWall::hyperplane(e1.direction());
    if (delta < 0.0) return wall_concentric_at(e1, -delta);
    return wall_concentric_at(e1, delta).flipped();
}

double UniformBoundReport::max_within(double bound) const {
    double M = -kInf;
    for (const OffsetSup& o : per_offset)
        if (std::abs(o.offset) <= bound) M = std::max(M, o.sup);
    return M;
}

UniformBoundReport uniform_bound_experiment(const EnvelopeContext& ctx, double c, const std::vector<double>& offsets,
                                            double d1) {
    require(!offsets.empty(), "uniform bound needs at least one offset");
    require(d1 > 0.0 && std::isfinite(d1), "d1 must be positive");
    UniformBoundReport rep{c, c0_threshold(ctx), d1, -kInf, {}};
    require(c >= rep.c0, "uniform bound needs c >= c0 = " + std::to_string(rep.c0));
    for (double delta : offsets) {
        ScherkBarrier b = build_super(ctx, wall_at_offset(ctx.n, delta), c);
        // the profile is decreasing, so the sup over [d1, inf) is attained at d1
        double sup = b.at(std::min(d1, b.d_max));
        rep.per_offset.push_back({delta, sup, b.h_c, b.d0});
        rep.M_observed = std::max(rep.M_observed, sup);
    }
    return rep;
}

std::vector<SqueezePoint> squeeze_trace(const EnvelopeContext& ctx, const BoundaryPoint& p, double t0, double c,
                                        double eps, const std::vector<double>& ts) {
    require(t0 > 0.0 && eps > 0.0, "squeeze needs t0 > 0 and eps > 0");
    ScherkBarrier b = build_super(ctx, wall_concentric_at(p, t0), c + eps);
    std::vector<SqueezePoint> out;
    out.reserve(ts.size());
    for (double t : ts) {
        double d = signed_wall_distance(ray_point(p, t), b.wall);
        out.push_back({t, d >= b.d_min ? b.profile(d) : kInf});
    }
    return out;
}

}  // namespace scherk

#include "scherk/hgeom.hpp"

#include <cmath>
#include <string>

#include "scherk/errors.hpp"

namespace scherk {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return dot(a, a); }

namespace {

void require_finite(const Vec& v, const char* what) {
    for (double c : v) require(std::isfinite(c), std::string(what) + " has a non-finite coordinate");
}

void require_same_dim(int a, int b) {
    require(a == b, "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

// 1 - |x|^2 for an interior point.
double conformal_gap(const Vec& x) {
    double r = std::sqrt(norm2(x));
    return (1.0 - r) * (1.0 + r);
}

}  // namespace

BallPoint::BallPoint(Vec x) : x_(std::move(x)) {
    require(x_.size() >= 2, "ball point dimension must be >= 2");
    require_finite(x_, "ball point");
    double r = std::sqrt(norm2(x_));
    require(r <= kBallGuard, "ball point too close to the ideal boundary (|x| = " + std::to_string(r) + ")");
}

BallPoint BallPoint::origin(int n) { return BallPoint(Vec(static_cast<std::size_t>(n), 0.0)); }

BoundaryPoint::BoundaryPoint(Vec direction) : u_(std::move(direction)) {
    require(u_.size() >= 2, "boundary point dimension must be >= 2");
    require_finite(u_, "boundary point");
    require(std::abs(std::sqrt(norm2(u_)) - 1.0) <= 1e-12, "boundary direction must be a unit vector");
}

BoundaryPoint BoundaryPoint::normalized(Vec v) {
    double r = std::sqrt(norm2(v));
    require(r > 0.0 && std::isfinite(r), "cannot normalize a zero direction");
    for (double& c : v) c /= r;
    return BoundaryPoint(std::move(v));
}

BoundaryPoint BoundaryPoint::axis(int n, int i) {
    require(n >= 2 && i >= 0 && i < n, "axis index out of range");
    Vec v(static_cast<std::size_t>(n), 0.0);
    v[static_cast<std::size_t>(i)] = 1.0;
    return BoundaryPoint(std::move(v));
}

GeodesicWall::GeodesicWall(Rep rep, int side) : rep_(std::move(rep)), side_(side) {}

GeodesicWall GeodesicWall::hyperplane(Vec normal, int side) {
    require(side == 1 || side == -1, "wall side must be +1 or -1");
    require(normal.size() >= 2, "wall dimension must be >= 2");
    require_finite(normal, "hyperplane normal");
    require(std::abs(std::sqrt(norm2(normal)) - 1.0) <= 1e-12, "hyperplane normal must be a unit vector");
    return GeodesicWall(HyperplaneThroughOrigin{std::move(normal)}, side);
}

GeodesicWall GeodesicWall::orthosphere(Vec center, double radius, int side) {
    require(side == 1 || side == -1, "wall side must be +1 or -1");
    require(center.size() >= 2, "wall dimension must be >= 2");
    require_finite(center, "orthosphere center");
    require(std::isfinite(radius) && radius > 0.0, "orthosphere radius must be positive");
    double mismatch = norm2(center) - (radius * radius + 1.0);
    require(std::abs(mismatch) <= 1e-10 * std::max(1.0, radius * radius),
            "orthosphere is not orthogonal to the ideal boundary (|c|^2 - rho^2 - 1 = " +
                std::to_string(mismatch) + ")");
    return GeodesicWall(OrthoSphere{std::move(center), radius}, side);
}

int GeodesicWall::dim() const noexcept {
    if (auto* h = std::get_if<HyperplaneThroughOrigin>(&rep_)) return static_cast<int>(h->normal.size());
    return static_cast<int>(std::get<OrthoSphere>(rep_).center.size());
}

GeodesicWall GeodesicWall::flipped() const { return GeodesicWall(rep_, -side_); }

double geodesic_distance(const BallPoint& a, const BallPoint& b) {
    require_same_dim(a.dim(), b.dim());
    double diff2 = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        double t = a[i] - b[i];
        diff2 += t * t;
    }
    double denom = conformal_gap(a.coords()) * conformal_gap(b.coords());
    // arcosh(1 + 2u^2) written as 2 asinh(u) to keep precision for nearby points
    return 2.0 * std::asinh(std::sqrt(diff2 / denom));
}

double signed_wall_distance(const BallPoint& x, const GeodesicWall& S) {
    require_same_dim(x.dim(), S.dim());
    const Vec& p = x.coords();
    double gap = conformal_gap(p);
    double s;
    if (auto* h = std::get_if<HyperplaneThroughOrigin>(&S.rep())) {
        s = 2.0 * dot(p, h->normal) / gap;
    } else {
        const auto& o = std::get<OrthoSphere>(S.rep());
        double q = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            double t = p[i] - o.center[i];
            q += t * t;
        }
        // |x-c|^2 - rho^2 factored to avoid cancellation on the wall
        double dist_c = std::sqrt(q);
        s = (dist_c - o.radius) * (dist_c + o.radius) / (o.radius * gap);
    }
    return S.side() * std::asinh(s);
}

BallPoint ray_point(const BoundaryPoint& p, double t) {
    require(std::isfinite(t) && t >= 0.0, "ray parameter must be finite and >= 0");
    double s = std::tanh(0.5 * t);
    Vec x = p.direction();
    for (double& c : x) c *= s;
    return BallPoint(std::move(x));
}

GeodesicWall wall_concentric_at(const BoundaryPoint& p, double t) {
    require(std::isfinite(t) && t > 0.0, "wall_concentric_at needs t > 0");
    double s = std::tanh(0.5 * t);
    require(s <= kBallGuard, "wall_concentric_at: t too large for double precision");
    double lambda = 0.5 * (s + 1.0 / s);
    double rho = 1.0 / std::sinh(t);
    Vec c = p.direction();
    for (double& v : c) v *= lambda;
    // p lies inside the Euclidean sphere, so the interior is the positive side
    return GeodesicWall::orthosphere(std::move(c), rho, -1);
}

BallPoint mobius_add(const BallPoint& a, const BallPoint& x) {
    require_same_dim(a.dim(), x.dim());
    const Vec& u = a.coords();
    const Vec& v = x.coords();
    double uv = dot(u, v), uu = norm2(u), vv = norm2(v);
    double den = 1.0 + 2.0 * uv + uu * vv;
    double cu = (1.0 + 2.0 * uv + vv) / den;
    double cv = (1.0 - uu) / den;
    Vec out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = cu * u[i] + cv * v[i];
    return BallPoint(std::move(out));
}

}  // namespace scherk

#pragma once

// Poincare ball model of H^n.

#include <variant>
#include <vector>

namespace scherk {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);

/// Points with |x| beyond this radius are rejected.
inline constexpr double kBallGuard = 1.0 - 1e-12;

class BallPoint {
public:
    /// Throws Validation if n < 2 or |x| > kBallGuard.
    explicit BallPoint(Vec x);
    static BallPoint origin(int n);

    const Vec& coords() const noexcept { return x_; }
    int dim() const noexcept { return static_cast<int>(x_.size()); }
    double operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }

private:
    Vec x_;
};

class BoundaryPoint {
public:
    /// `direction` must have unit norm within 1e-12; use normalized() for raw vectors.
    explicit BoundaryPoint(Vec direction);
    static BoundaryPoint normalized(Vec v);
    static BoundaryPoint axis(int n, int i);

    const Vec& direction() const noexcept { return u_; }
    int dim() const noexcept { return static_cast<int>(u_.size()); }

private:
    Vec u_;
};

struct HyperplaneThroughOrigin {
    Vec normal;
};

struct OrthoSphere {
    Vec center;
    double radius;
};

/// Totally geodesic hypersphere with a chosen positive side B.
///
/// For a hyperplane the positive side is {<x, normal> > 0} when side = +1.
/// For an orthosphere it is the exterior of the Euclidean sphere when side = +1.
class GeodesicWall {
public:
    using Rep = std::variant<HyperplaneThroughOrigin, OrthoSphere>;

    static GeodesicWall hyperplane(Vec normal, int side = 1);
    static GeodesicWall orthosphere(Vec center, double radius, int side = 1);

    const Rep& rep() const noexcept { return rep_; }
    int side() const noexcept { return side_; }
    int dim() const noexcept;
    bool is_hyperplane() const noexcept { return std::holds_alternative<HyperplaneThroughOrigin>(rep_); }

    GeodesicWall flipped() const;

private:
    GeodesicWall(Rep rep, int side);
    Rep rep_;
    int side_;
};

double geodesic_distance(const BallPoint& a, const BallPoint& b);

/// Signed distance to S, positive on the wall's positive side.
double signed_wall_distance(const BallPoint& x, const GeodesicWall& S);

/// Point at hyperbolic arclength t from the origin along the ray toward p.
BallPoint ray_point(const BoundaryPoint& p, double t);

/// Wall orthogonal to the ray toward p at arclength t; positive side contains p.
GeodesicWall wall_concentric_at(const BoundaryPoint& p, double t);

/// Mobius addition a (+) x: the hyperbolic translation taking the origin to a.
BallPoint mobius_add(const BallPoint& a, const BallPoint& x);

}  // namespace scherk

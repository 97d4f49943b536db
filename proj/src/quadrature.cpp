#include "scherk/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace scherk {

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, unsigned max_depth) {
    if (a == b) return {0.0, 0.0};
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol, &err);
    return {v, std::abs(err)};
}

}  // namespace scherk

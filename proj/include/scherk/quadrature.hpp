#pragma once

#include <functional>

namespace scherk {

struct QuadResult {
    double value;
    double error;  // estimated absolute error
};

/// Adaptive Gauss-Kronrod (15 point) on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13,
                     unsigned max_depth = 12);

}  // namespace scherk

#pragma once

#include <functional>

namespace slnatlas::quadrature {

// Globally adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
// Bisects the worst interval until the summed error estimate satisfies
//   err <= max(abs_tol, rel_tol * |integral|)
// or the subdivision budget runs out; returns the best estimate either way.
// The integrand must be finite on [a, b]; callers exclude singular points.
struct Result {
    double value;
    double error;  // estimated absolute error
};

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-12,
                 int max_intervals = 2000);

}  // namespace slnatlas::quadrature

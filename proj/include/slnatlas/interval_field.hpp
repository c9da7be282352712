#pragma once

#include <array>
#include <functional>
#include <variant>
#include <vector>

namespace slnatlas {

// Analytic vector field X(t) d/dt on a compact interval, either a polynomial
// in t (exact derivatives of every order) or a sampled evaluator returning
// the derivative jet [X, X', ..., X^(depth)] at a point.
struct IntervalPoly {
    std::vector<double> coeffs;  // monomial coefficients, coeffs[i] * t^i
};

struct SampledInterval {
    int depth = 6;  // >= 4
    std::function<std::vector<double>(double)> jet;
};

struct IntervalField {
    std::array<double, 2> domain{-1.0, 1.0};
    std::variant<IntervalPoly, SampledInterval> repr;

    bool exact() const { return std::holds_alternative<IntervalPoly>(repr); }
    // Highest derivative order available (huge sentinel for polynomials).
    int depth() const;
    double eval(double t, int deriv = 0) const;
    // Taylor coefficients X^(j)(t)/j! for j = 0..count-1.
    std::vector<double> taylor(double t, int count) const;
};

// Convenience constructor: polynomial field on [lo, hi].
IntervalField make_poly_field(std::vector<double> coeffs, double lo = -1.0,
                              double hi = 1.0);

// max |X| over a 1024-point grid on the domain; scale for zero tolerances.
double sup_norm(const IntervalField& X);

struct IntervalZero {
    double t;
    int order;                   // m >= 1
    std::vector<double> taylor;  // X^(j)(t)/j!, j = 0 .. order+3 (or depth cap)
};

// All zeros of X on its domain, endpoints included, sorted by t. A zero has
// order m when derivatives below m vanish against tol_zero * max(1, sup_norm).
// Throws IdenticallyZero or ZeroIsolationFailure as for circle fields.
std::vector<IntervalZero> find_interval_zeros(const IntervalField& X,
                                              double tol_zero = 1e-9);

}  // namespace slnatlas

#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "slnatlas/interval_field.hpp"

namespace slnatlas {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Reduce an angle to [0, 2*pi).
double wrap_angle(double theta);

// Real trigonometric polynomial
//   f(theta) = a0 + sum_j a_j cos(j theta) + b_j sin(j theta).
struct TrigPoly {
    double a0 = 0.0;
    std::vector<double> cos_coeffs;  // a_j, j = 1..N
    std::vector<double> sin_coeffs;  // b_j, j = 1..N (padded to equal length)

    int degree() const;  // highest j with a nonzero coefficient; 0 if constant
    double eval(double theta, int deriv = 0) const;
};

// Sampled circle field: jet(theta) returns [f, f', ..., f^(depth)].
// `value`, when set, is a cheaper path for plain evaluation; quadrature of
// 1/f leans on it heavily.
struct SampledCircle {
    int depth = 6;  // >= 4
    std::function<std::vector<double>(double)> jet;
    std::function<double(double)> value;
};

// Analytic vector field f(theta) d/dtheta on the circle. Exact fields are
// trig polynomials; sampled fields carry finitely many derivatives (needed
// because pushforwards and doublings are not trig polynomials).
struct CircleField {
    std::variant<TrigPoly, SampledCircle> repr;

    bool exact() const { return std::holds_alternative<TrigPoly>(repr); }
    int depth() const;  // huge sentinel for exact fields
    double eval(double theta, int deriv = 0) const;
    // Taylor coefficients f^(j)(theta)/j! for j = 0..count-1.
    std::vector<double> taylor(double theta, int count) const;
};

CircleField make_trig_field(TrigPoly p);

// max |f| over a 1024-point grid; scale for zero tolerances and the
// identically-zero test on sampled fields.
double sup_norm(const CircleField& f);

struct ZeroDatum {
    double theta;                // in [0, 2*pi)
    int order;                   // m >= 1
    std::vector<double> taylor;  // f^(j)(theta)/j!, j = 0 .. order+3 (depth cap)
};

// All zeros of f in [0, 2*pi), sorted. Exact fields go through the
// z = exp(i theta) substitution: the Laurent polynomial sum c_j z^j times z^N
// is an ordinary degree-2N polynomial whose unit-circle roots are the real
// zeros; roots come from the companion matrix and are Newton-polished on
// f^(m-1), which has a simple zero where f has an order-m zero. Sampled
// fields are bracketed on a dense grid (sign changes and small local minima
// of |f| for even orders) and polished the same way.
// Throws IdenticallyZero, ZeroIsolationFailure, DerivDepthExceeded.
std::vector<ZeroDatum> find_zeros(const CircleField& f, double tol_zero = 1e-9);

// Time-t flow of the field through theta0, reduced to [0, 2*pi).
double flow(const CircleField& f, double theta0, double t);

// Orientation-preserving circle diffeomorphism h(theta) = theta + d(theta)
// with trig-polynomial displacement d. h lifts to an increasing map of the
// line with h(theta + 2 pi) = h(theta) + 2 pi.
struct CircleDiffeo {
    TrigPoly displacement;

    double eval(double theta) const;
    double deriv(double theta, int order = 1) const;  // order >= 1
    double inverse(double phi) const;                 // to 1e-12 or better
};

// h_* f: phi -> h'(h^{-1}(phi)) * f(h^{-1}(phi)), as a sampled field with
// derivative depth 4 (chain rule through truncated series). Throws
// NotDiffeomorphism when min h' <= 0 on a 4096-point grid.
CircleField pushforward(const CircleField& f, const CircleDiffeo& h);

// Involutions of S^{n-1} x S^1 relevant to the classification, acting on the
// circle factor: Identity and ComponentSwap fix it pointwise, FreeRotation is
// theta -> theta + pi, Reflection is theta -> 2*axis - theta.
struct Involution {
    enum class Kind { Identity, ComponentSwap, FreeRotation, Reflection };
    Kind kind = Kind::Identity;
    double axis = 0.0;  // Reflection only
};

// True when f is compatible with tau on a 1024-point grid:
// FreeRotation needs f(theta + pi) = f(theta); Reflection needs
// f(2*axis - theta) = -f(theta); the pointwise kinds are always compatible.
// Tolerance is relative to max(1, sup_norm).
bool validate_involution(const CircleField& f, const Involution& tau,
                         double tol = 1e-9);

// Doubles an interval field X on [-1, 1] with X(-1) = X(1) = 0 and
// X'(-1) = X'(1) = 1 to the circle field f(theta) = X(-cos theta)/sin theta,
// odd under theta -> -theta; the endpoint images 0 and pi become order-1
// zeros of residue +2. Returns a sampled field (depth 6 for polynomial X).
// Throws EndpointConstraintViolated when the normalization fails.
CircleField double_interval(const IntervalField& X);

}  // namespace slnatlas

#pragma once

#include <cstddef>
#include <vector>

namespace slnatlas::series {

// Truncated power series with double coefficients: s[j] multiplies x^j.
// All operations truncate to the requested length n (coefficients 0..n-1).
// Lengths are small (a few dozen at most); the O(n^2)/O(n^3) algorithms here
// are deliberate.
using Series = std::vector<double>;

// c[j] = sum_{i=0..j} a[i] b[j-i], truncated to n coefficients.
Series mul(const Series& a, const Series& b, std::size_t n);

// Reciprocal of a with a[0] != 0: recip(a)*a = 1 + O(x^n).
Series recip(const Series& a, std::size_t n);

// f(g(x)) truncated to n coefficients; requires g[0] == 0.
Series compose(const Series& f, const Series& g, std::size_t n);

// Compositional inverse of f with f[0] == 0, f[1] != 0:
// compose(f, revert(f)) = x + O(x^n).
Series revert(const Series& f, std::size_t n);

// Termwise derivative (length shrinks by one).
Series derive(const Series& a);

// Value of sum s[j] x^j at x (plain Horner).
double eval(const Series& s, double x);

// k-th derivative of the truncated series at x.
double eval_deriv(const Series& s, std::size_t k, double x);

}  // namespace slnatlas::series

#pragma once

#include <vector>

#include "slnatlas/circle_field.hpp"
#include "slnatlas/interval_field.hpp"

namespace slnatlas {

// Laurent expansion of 1/f about an order-m zero:
//   1/f = sum_{j >= -m} c_j (theta - theta0)^j.
// Obtained by truncated power-series inversion of the Taylor coefficients,
// never by quadrature.
struct LaurentData {
    int order = 1;               // m
    std::vector<double> coeffs;  // c_{-m} .. c_{depth}

    double c(int j) const {      // coefficient of x^j; 0 outside range
        const int i = j + order;
        if (i < 0 || i >= static_cast<int>(coeffs.size())) return 0.0;
        return coeffs[static_cast<std::size_t>(i)];
    }
};

// Coefficients through x^depth. Needs f's Taylor data through order
// 2m + depth; sampled fields that cannot supply it raise
// InsufficientDerivativeDepth.
LaurentData laurent_at_zero(const CircleField& f, const ZeroDatum& z,
                            int depth = 1);

// c_{-1}; equals 1/f'(theta0) at order-1 zeros.
double residue(const CircleField& f, const ZeroDatum& z);

// Regularized period integral of 1/f. k = 0: plain adaptive quadrature.
// k >= 1: symmetric-cutoff Hadamard finite part; each zero gets a window of
// half-width min(0.1, half gap to the nearest zero) where the singular
// Laurent model integrates in closed form (odd powers cancel symmetrically,
// even powers contribute 2 c_{-j} delta^{1-j}/(1-j)) and the regular
// remainder integrates by series core plus adaptive quadrature rings; the
// arcs between windows integrate adaptively. Recomputed with halved windows;
// disagreement beyond 1e-6 raises NonconvergentRegularization.
double global_invariant(const CircleField& f,
                        const std::vector<ZeroDatum>& zeros);

struct ZeroInvariant {
    int order = 1;
    double residue = 0.0;
};

// The complete conjugacy data of a circle field: zero count k, orientation
// sigma, the cyclic list of (order, residue) read counterclockwise, and the
// regularized period mu. Zero locations ride along for diagnostics; they are
// not invariants.
struct HitchinInvariants {
    int k = 0;
    int sigma = 1;  // sign(f) when k = 0; +1 (reading convention) otherwise
    std::vector<ZeroInvariant> zero_data;
    std::vector<double> thetas;
    double mu = 0.0;
    double tol_zero = 1e-9;
};

HitchinInvariants invariants(const CircleField& f, double tol_zero = 1e-9);

struct CanonicalKey {
    int k = 0;
    int sigma = 1;
    std::vector<ZeroInvariant> zero_data;
    double mu = 0.0;
};

// Least element of the dihedral orbit of (sigma, zero_data): the k rotations
// shift the cyclic sequence and keep sigma; the k reflections reverse it and
// flip sigma; mu is fixed by both. Comparison is lexicographic (orders as
// integers, residues with relative tol_match treated as ties deferring to
// the next entry, sigma +1 preferred); candidates are pre-sorted exactly, so
// relabelings of one tuple give bitwise identical keys.
CanonicalKey canonical_key(const HitchinInvariants& inv,
                           double tol_match = 1e-6);

// True when some dihedral image of b lies within tol_match of a
// (componentwise relative distance on residues and mu, orders and k exact,
// sigma respected). A best distance inside (tol_match, 4*tol_match) raises
// AmbiguousMatch instead of guessing.
bool equivalent_invariants(const HitchinInvariants& a,
                           const HitchinInvariants& b,
                           double tol_match = 1e-6);

// Interval analogue: zeros (endpoints included) with orders and residues,
// plus one regularized integral of 1/X per gap between consecutive zeros,
// using the same finite-part convention applied one-sided at each end (log
// divergences are normalized by the gap length, which makes the value 0 for
// the symmetric field (1-t^2)/2).
struct IntervalInvariants {
    std::vector<double> positions;
    std::vector<ZeroInvariant> zero_data;
    std::vector<double> gap_integrals;
    double tol_zero = 1e-9;
};

IntervalInvariants interval_invariants(const IntervalField& X,
                                       double tol_zero = 1e-9);

// Max componentwise relative distance between two interval records; flipped
// compares against the t -> -t image of b (reversed, gap values negated).
// Infinite on any structural (count or order) mismatch.
double interval_invariants_distance(const IntervalInvariants& a,
                                    const IntervalInvariants& b, bool flipped);

// Shared tolerance gate: true at or below tol_match, false at or beyond
// 4x tol_match, AmbiguousMatch in the buffer between.
bool decide_match(double dist, double tol_match);

// Entrywise comparison of interval invariants; allow_flip also accepts a
// match against the t -> -t conjugate: records reversed, orders and residues
// unchanged, gap values negated (conjugating by t -> -t sends X to -X(-t),
// which preserves each c_{-1} and flips the sign of every dt/X integral).
bool equivalent_interval(const IntervalField& a, const IntervalField& b,
                         double tol_match = 1e-6, bool allow_flip = false,
                         double tol_zero = 1e-9);

}  // namespace slnatlas

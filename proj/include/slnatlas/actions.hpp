#pragma once

#include <string>
#include <variant>
#include <vector>

#include "slnatlas/circle_field.hpp"
#include "slnatlas/interval_field.hpp"

namespace slnatlas {

// One orbit type from the Cairns-Ghys list: a point, the projective actions
// on S^{n-1} and RP^{n-1}, the punctured linear space R^n \ {0} and its
// quotients by a discrete scalar subgroup, and the two exceptional closed
// orbits (the flag variety for n = 3, the Grassmannian Gr(2,4) for n = 4),
// each of which may also appear as a finite cover.
struct OrbitType {
    enum class Tag { Point, Sphere, ProjSpace, PuncturedRn, Flag3, Gr24 };
    Tag tag = Tag::Point;
    // PuncturedRn only: 0 means the trivial lattice (R^n \ {0} itself);
    // a value > 1 is the generator of the scalar lattice, giving a closed
    // quotient (a Hopf manifold).
    double lambda = 0.0;
    bool finite_cover = false;
};

// Label equality: tags and cover markers must agree exactly; PuncturedRn
// lattices must both be trivial or have generators within relative
// tol_match.
bool same_orbit(const OrbitType& a, const OrbitType& b, double tol_match);

// The statically encoded orbit list for dimension n: the four
// non-exceptional families (PuncturedRn appears once, its lattice being a
// family parameter), plus the exceptional orbit in dimensions 3 and 4
// together with its finite-cover-marked twin. DimensionTooSmall for n < 3.
std::vector<OrbitType> orbit_catalog(int n);

// Construction-I data: a circle field on the core curve plus the involution
// it must commute with. components = 2 exactly when tau swaps the two
// boundary components.
struct TypeIAction {
    int n = 3;
    int components = 1;
    CircleField field;
    Involution tau;
};

// Construction-II data: an interval field on [-1,1] (sphere case) or, when
// quotient is set, on [-1,0] (projective case).
struct TypeIIAction {
    int n = 3;
    IntervalField field;
    bool quotient = false;
};

struct TypeIClass {
    int case_id = 0;  // 1..4
    std::string label;
};

// The four fixed-point-free cases: 1 boundary-swapping (S^{n-1} x S^1),
// 2 trivial involution (RP^{n-1} x S^1), 3 free rotation (flat circle
// bundle with Z_2 monodromy), 4 reflection (blow-up of RP^n at a point).
// InvalidActionData when the data violates its own invariants (n < 3,
// components inconsistent with tau, or the field not tau-invariant).
TypeIClass classify_type_I(const TypeIAction& a);

struct TypeIIClass {
    bool projective = false;
    int fixed_points = 2;
    std::string label;
};

// Sphere case: field vanishes at +-1 with derivative 1 there and has an
// interior zero -> "S^n, two fixed points". Projective case: field on
// [-1,0] vanishing at both ends with derivative 1 at -1 -> "RP^n, one
// fixed point". InvalidActionData on any endpoint-constraint violation or
// a sphere field with no interior zero.
TypeIIClass classify_type_II(const TypeIIAction& a);

// A complete action: transitive on one orbit type, or one of the two
// constructions.
struct ActionDescriptor {
    std::variant<OrbitType, TypeIAction, TypeIIAction> data;
};

// Odd extension of a projective-case field from [-1,0] to [-1,1]:
// X~(t) = -X(-t) for t > 0. This is the field of the double cover; the jet
// at the seam t = 0 is the odd part of the germ there, which is exact for
// data arising from a genuinely odd field and makes the regularized
// invariants of the doubled field well defined in general (the even core
// terms of a seam window cancel in pairs).
IntervalField odd_extension(const IntervalField& X);

// Equivariant equivalence: same top-level kind; transitive actions by
// orbit-label equality; Construction I by case, involution class, and
// circle-field invariants; Construction II by homotopy type and the
// invariants of the doubled fields (projective data is odd-extended first).
// AmbiguousMatch propagates from the invariant comparison.
bool equivalent_actions(const ActionDescriptor& a, const ActionDescriptor& b,
                        double tol_match = 1e-6);

// Construction I with trivial or component-swapping involution and a
// nonvanishing field: the mapping-torus quotients of R^n \ {0}.
bool is_hopf(const ActionDescriptor& a);

// Whether the action preserves a projective structure: Hopf manifolds, the
// standard sphere action (single interior zero, order 1, derivative -1),
// its projective quotient (no interior zero, derivative -1 at the 0 end),
// and the transitive action on a punctured-space quotient by a nontrivial
// lattice. The exceptional homogeneous spaces and everything else do not.
bool admits_projective(const ActionDescriptor& a);

}  // namespace slnatlas

#include "slnatlas/actions.hpp"

#include <algorithm>
#include <cmath>

#include "slnatlas/errors.hpp"
#include "slnatlas/invariants.hpp"

namespace slnatlas {
namespace {

constexpr double kSeamBand = 1e-7;       // odd part used this close to t = 0
constexpr double kStructureTol = 1e-6;   // derivative checks in admits_projective
constexpr double kInteriorMargin = 1e-6; // distance from an endpoint to count as interior

double rel_close(double x, double y) {
    return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
}

void check_endpoint(const IntervalField& X, double t, bool unit_derivative,
                    double scale, const char* which) {
    if (std::abs(X.eval(t)) > 1e-7 * scale)
        throw InvalidActionData(std::string("field does not vanish at the ") +
                                which + " endpoint");
    if (unit_derivative && std::abs(X.eval(t, 1) - 1.0) > 1e-7 * scale)
        throw InvalidActionData(
            std::string("field derivative at the ") + which +
            " endpoint is not 1");
}

std::vector<IntervalZero> interior_zeros(const IntervalField& X) {
    std::vector<IntervalZero> out;
    for (const auto& z : find_interval_zeros(X))
        if (z.t > X.domain[0] + kInteriorMargin &&
            z.t < X.domain[1] - kInteriorMargin)
            out.push_back(z);
    return out;
}

void validate_type_I(const TypeIAction& a) {
    if (a.n < 3)
        throw InvalidActionData("Construction I requires dimension >= 3");
    if (a.components != 1 && a.components != 2)
        throw InvalidActionData("component count must be 1 or 2");
    if ((a.components == 2) !=
        (a.tau.kind == Involution::Kind::ComponentSwap))
        throw InvalidActionData(
            "two components exactly when the involution swaps them");
    if (!validate_involution(a.field, a.tau))
        throw InvalidActionData("field is not invariant under the involution");
}

void validate_type_II(const TypeIIAction& a) {
    if (a.n < 3)
        throw InvalidActionData("Construction II requires dimension >= 3");
    const double right = a.quotient ? 0.0 : 1.0;
    if (std::abs(a.field.domain[0] + 1.0) > 1e-12 ||
        std::abs(a.field.domain[1] - right) > 1e-12)
        throw InvalidActionData(a.quotient
                                    ? "projective-case field must live on [-1,0]"
                                    : "sphere-case field must live on [-1,1]");
    const double scale = std::max(1.0, sup_norm(a.field));
    check_endpoint(a.field, -1.0, true, scale, "left");
    check_endpoint(a.field, right, !a.quotient, scale, "right");
    if (!a.quotient && interior_zeros(a.field).empty())
        throw InvalidActionData("sphere-case field has no interior zero");
}

}  // namespace

bool same_orbit(const OrbitType& a, const OrbitType& b, double tol_match) {
    if (a.tag != b.tag || a.finite_cover != b.finite_cover) return false;
    if (a.tag != OrbitType::Tag::PuncturedRn) return true;
    const bool ta = a.lambda == 0.0, tb = b.lambda == 0.0;
    if (ta != tb) return false;
    return ta || rel_close(a.lambda, b.lambda) <= tol_match;
}

std::vector<OrbitType> orbit_catalog(int n) {
    if (n < 3)
        throw DimensionTooSmall("no classification below dimension 3");
    std::vector<OrbitType> out{
        {OrbitType::Tag::Point, 0.0, false},
        {OrbitType::Tag::Sphere, 0.0, false},
        {OrbitType::Tag::ProjSpace, 0.0, false},
        {OrbitType::Tag::PuncturedRn, 0.0, false},
    };
    if (n == 3) {
        out.push_back({OrbitType::Tag::Flag3, 0.0, false});
        out.push_back({OrbitType::Tag::Flag3, 0.0, true});
    }
    if (n == 4) {
        out.push_back({OrbitType::Tag::Gr24, 0.0, false});
        out.push_back({OrbitType::Tag::Gr24, 0.0, true});
    }
    return out;
}

TypeIClass classify_type_I(const TypeIAction& a) {
    validate_type_I(a);
    if (a.components == 2) return {1, "S^{n-1} x S^1"};
    switch (a.tau.kind) {
        case Involution::Kind::Identity:
            return {2, "RP^{n-1} x S^1"};
        case Involution::Kind::FreeRotation:
            return {3, "flat circle bundle with Z_2 monodromy"};
        case Involution::Kind::Reflection:
            return {4, "blow-up of RP^n at a point"};
        case Involution::Kind::ComponentSwap:
            break;  // unreachable: components == 2 was handled
    }
    throw InvalidActionData("unrecognized involution");
}

TypeIIClass classify_type_II(const TypeIIAction& a) {
    validate_type_II(a);
    if (a.quotient) return {true, 1, "RP^n, one fixed point"};
    return {false, 2, "S^n, two fixed points"};
}

IntervalField odd_extension(const IntervalField& X) {
    const int depth = X.exact() ? 6 : X.depth();
    const int count = depth + 1;
    auto jet = [X, count](double t) {
        std::vector<double> c;  // Taylor coefficients first
        if (t < -kSeamBand) {
            c = X.taylor(t, count);
        } else if (t > kSeamBand) {
            c = X.taylor(-t, count);
            for (std::size_t j = 0; j < c.size(); ++j)
                if (j % 2 == 0) c[j] = -c[j];  // X~^(j)(t) = (-1)^{j+1} X^(j)(-t)
        } else {
            c = X.taylor(0.0, count);
            for (std::size_t j = 0; j < c.size(); j += 2) c[j] = 0.0;
        }
        double fact = 1.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            c[j] *= fact;  // jet convention is derivatives, not coefficients
            fact *= static_cast<double>(j + 1);
        }
        return c;
    };
    IntervalField out;
    out.domain = {-1.0, 1.0};
    out.repr = SampledInterval{depth, std::move(jet)};
    return out;
}

namespace {

// Circle field of the double cover determined by Construction-II data.
CircleField doubled_field(const TypeIIAction& a) {
    return double_interval(a.quotient ? odd_extension(a.field) : a.field);
}

bool fields_equivalent(const CircleField& fa, const CircleField& fb,
                       double tol_match) {
    const bool za = sup_norm(fa) == 0.0, zb = sup_norm(fb) == 0.0;
    if (za || zb) return za && zb;  // identically-zero fields form one class
    return equivalent_invariants(invariants(fa), invariants(fb), tol_match);
}

}  // namespace

bool equivalent_actions(const ActionDescriptor& a, const ActionDescriptor& b,
                        double tol_match) {
    if (a.data.index() != b.data.index()) return false;
    if (const auto* oa = std::get_if<OrbitType>(&a.data))
        return same_orbit(*oa, std::get<OrbitType>(b.data), tol_match);
    if (const auto* ta = std::get_if<TypeIAction>(&a.data)) {
        const auto& tb = std::get<TypeIAction>(b.data);
        if (classify_type_I(*ta).case_id != classify_type_I(tb).case_id)
            return false;
        return fields_equivalent(ta->field, tb.field, tol_match);
    }
    const auto& ua = std::get<TypeIIAction>(a.data);
    const auto& ub = std::get<TypeIIAction>(b.data);
    if (classify_type_II(ua).projective != classify_type_II(ub).projective)
        return false;
    return fields_equivalent(doubled_field(ua), doubled_field(ub), tol_match);
}

bool is_hopf(const ActionDescriptor& a) {
    const auto* t = std::get_if<TypeIAction>(&a.data);
    if (t == nullptr) return false;
    if (t->tau.kind != Involution::Kind::Identity &&
        t->tau.kind != Involution::Kind::ComponentSwap)
        return false;
    if (sup_norm(t->field) == 0.0) return false;  // X = 0 is not nonvanishing
    return find_zeros(t->field).empty();
}

bool admits_projective(const ActionDescriptor& a) {
    if (is_hopf(a)) return true;
    if (const auto* o = std::get_if<OrbitType>(&a.data))
        return o->tag == OrbitType::Tag::PuncturedRn && o->lambda != 0.0;
    const auto* t = std::get_if<TypeIIAction>(&a.data);
    if (t == nullptr) return false;
    validate_type_II(*t);
    if (t->quotient) {
        // Quotient of the standard sphere: nothing vanishes strictly inside
        // [-1,0] and the derivative at the 0 end is -1.
        return interior_zeros(t->field).empty() &&
               std::abs(t->field.eval(0.0, 1) + 1.0) <= kStructureTol;
    }
    const std::vector<IntervalZero> inner = interior_zeros(t->field);
    return inner.size() == 1 && inner.front().order == 1 &&
           std::abs(t->field.eval(inner.front().t, 1) + 1.0) <= kStructureTol;
}

}  // namespace slnatlas

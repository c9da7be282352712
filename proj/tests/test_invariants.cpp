#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "slnatlas/circle_field.hpp"
#include "slnatlas/errors.hpp"
#include "slnatlas/invariants.hpp"

using namespace slnatlas;

namespace {

CircleField trig(double a0, std::vector<double> c, std::vector<double> s) {
    TrigPoly p;
    p.a0 = a0;
    p.cos_coeffs = std::move(c);
    p.sin_coeffs = std::move(s);
    return make_trig_field(std::move(p));
}

const double kPi = kTwoPi / 2.0;

// -f(-theta): the pushforward of f under the reflection theta to -theta.
CircleField reflect_field(const CircleField& f) {
    const auto& p = std::get<TrigPoly>(f.repr);
    TrigPoly q;
    q.a0 = -p.a0;
    for (double a : p.cos_coeffs) q.cos_coeffs.push_back(-a);
    q.sin_coeffs = p.sin_coeffs;
    return make_trig_field(std::move(q));
}

// Does b equal some cyclic rotation of a, entrywise within tol on residues?
bool cyclically_equal(const std::vector<ZeroInvariant>& a,
                      const std::vector<ZeroInvariant>& b, double tol) {
    if (a.size() != b.size()) return false;
    const std::size_t k = a.size();
    for (std::size_t s = 0; s < k; ++s) {
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            const ZeroInvariant& x = a[(i + s) % k];
            ok = x.order == b[i].order && std::abs(x.residue - b[i].residue) <
                                              tol * std::max(1.0, std::abs(b[i].residue));
        }
        if (ok) return true;
    }
    return false;
}

HitchinInvariants synthetic(int sigma, std::vector<ZeroInvariant> zd,
                            double mu) {
    HitchinInvariants inv;
    inv.k = static_cast<int>(zd.size());
    inv.sigma = sigma;
    inv.zero_data = std::move(zd);
    for (int i = 0; i < inv.k; ++i)
        inv.thetas.push_back(kTwoPi * i / std::max(1, inv.k));
    inv.mu = mu;
    return inv;
}

bool keys_bitwise_equal(const CanonicalKey& a, const CanonicalKey& b) {
    if (a.k != b.k || a.sigma != b.sigma) return false;
    if (std::memcmp(&a.mu, &b.mu, sizeof(double)) != 0) return false;
    if (a.zero_data.size() != b.zero_data.size()) return false;
    for (std::size_t i = 0; i < a.zero_data.size(); ++i) {
        if (a.zero_data[i].order != b.zero_data[i].order) return false;
        if (std::memcmp(&a.zero_data[i].residue, &b.zero_data[i].residue,
                        sizeof(double)) != 0)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("laurent expansion of 1/sin at 0") {
    const CircleField f = trig(0.0, {}, {1.0});
    const auto z = find_zeros(f);
    const LaurentData ld = laurent_at_zero(f, z[0], 3);
    CHECK(ld.order == 1);
    CHECK(ld.c(-1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(ld.c(0)) < 1e-13);
    CHECK(ld.c(1) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("laurent expansion of 1/(1 - cos) at its order-2 zero") {
    const CircleField f = trig(1.0, {-1.0}, {});
    const auto z = find_zeros(f);
    REQUIRE(z.size() == 1);
    const LaurentData ld = laurent_at_zero(f, z[0], 2);
    CHECK(ld.order == 2);
    CHECK(ld.c(-2) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(ld.c(-1)) < 1e-12);
    CHECK(ld.c(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("residues of sin are +1 and -1") {
    const CircleField f = trig(0.0, {}, {1.0});
    const auto z = find_zeros(f);
    CHECK(residue(f, z[0]) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(residue(f, z[1]) == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("residue at a simple zero is the reciprocal derivative") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int done = 0;
    while (done < 25) {
        const CircleField f =
            trig(0.4 * U(rng), {U(rng), 0.3 * U(rng)}, {U(rng), 0.3 * U(rng)});
        std::vector<ZeroDatum> zs;
        try {
            zs = find_zeros(f);
        } catch (const Error&) {
            continue;
        }
        bool simple = true;
        for (const auto& z : zs) simple = simple && z.order == 1;
        if (!simple || zs.empty()) continue;
        for (const auto& z : zs)
            CHECK(std::abs(residue(f, z) - 1.0 / f.eval(z.theta, 1)) < 1e-10);
        ++done;
    }
}

TEST_CASE("mu of constant fields is 2pi/c") {
    for (double c : {0.5, 1.0, 2.0, -3.0}) {
        const CircleField f = trig(c, {}, {});
        CHECK(std::abs(global_invariant(f, {}) - kTwoPi / c) < 1e-12);
    }
}

TEST_CASE("mu of a + b cos matches the closed form") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 8; ++i) {
        const double b = 2.0 * U(rng) - 1.0;
        const double a = std::abs(b) + 0.1 + 2.0 * U(rng);
        const CircleField f = trig(a, {b}, {});
        const double want = kTwoPi / std::sqrt(a * a - b * b);
        CHECK(std::abs(global_invariant(f, {}) - want) < 1e-8);
    }
}

TEST_CASE("regularized mu of 1 - cos vanishes") {
    const CircleField f = trig(1.0, {-1.0}, {});
    const auto z = find_zeros(f);
    CHECK(std::abs(global_invariant(f, z)) < 1e-6);
}

TEST_CASE("regularized mu of sin vanishes by antisymmetry") {
    const CircleField f = trig(0.0, {}, {1.0});
    const auto z = find_zeros(f);
    CHECK(std::abs(global_invariant(f, z)) < 1e-8);
}

TEST_CASE("invariants assembles the full tuple") {
    const HitchinInvariants inv = invariants(trig(0.0, {}, {1.0}));
    CHECK(inv.k == 2);
    CHECK(inv.sigma == 1);
    REQUIRE(inv.zero_data.size() == 2);
    CHECK(inv.zero_data[0].order == 1);
    CHECK(inv.zero_data[0].residue == doctest::Approx(1.0));
    CHECK(inv.zero_data[1].residue == doctest::Approx(-1.0));
    CHECK(std::abs(inv.thetas[0]) < 1e-9);
    CHECK(inv.thetas[1] == doctest::Approx(kPi));
    CHECK(std::abs(inv.mu) < 1e-8);

    const HitchinInvariants c2 = invariants(trig(2.0, {}, {}));
    CHECK(c2.k == 0);
    CHECK(c2.sigma == 1);
    CHECK(c2.mu == doctest::Approx(kPi).epsilon(1e-13));

    const HitchinInvariants neg = invariants(trig(-1.0, {}, {}));
    CHECK(neg.k == 0);
    CHECK(neg.sigma == -1);
    CHECK(neg.mu == doctest::Approx(-kTwoPi).epsilon(1e-13));
}

TEST_CASE("canonical_key rotates to the least representative") {
    const HitchinInvariants inv =
        synthetic(1, {{1, 3.0}, {1, 2.0}}, 0.5);
    const CanonicalKey key = canonical_key(inv);
    REQUIRE(key.zero_data.size() == 2);
    CHECK(key.zero_data[0].residue == 2.0);
    CHECK(key.zero_data[1].residue == 3.0);
}

TEST_CASE("canonical_key identifies a tuple with its reflection") {
    // reflection relabeling: order reversed, values kept, sigma flipped
    const HitchinInvariants a = synthetic(1, {{1, 1.0}, {1, -1.0}}, 0.0);
    const HitchinInvariants b = synthetic(-1, {{1, -1.0}, {1, 1.0}}, 0.0);
    CHECK(keys_bitwise_equal(canonical_key(a), canonical_key(b)));
}

TEST_CASE("canonical_key is bitwise stable across dihedral relabelings") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::uniform_int_distribution<int> K(1, 7), M(1, 3);
    for (int rep = 0; rep < 25; ++rep) {
        const int k = K(rng);
        std::vector<ZeroInvariant> zd;
        for (int i = 0; i < k; ++i) {
            double r = U(rng);
            if (std::abs(r) < 0.05) r = 0.3;
            zd.push_back({M(rng), r});
        }
        const double mu = U(rng);
        const CanonicalKey ref = canonical_key(synthetic(1, zd, mu));
        for (int s = 0; s < k; ++s) {
            std::vector<ZeroInvariant> rot;
            for (int i = 0; i < k; ++i) rot.push_back(zd[(i + s) % k]);
            CHECK(keys_bitwise_equal(ref, canonical_key(synthetic(1, rot, mu))));
            std::vector<ZeroInvariant> refl(rot.rbegin(), rot.rend());
            CHECK(keys_bitwise_equal(ref,
                                     canonical_key(synthetic(-1, refl, mu))));
        }
    }
}

TEST_CASE("equivalence is reflexive and detects scaling") {
    const HitchinInvariants s1 = invariants(trig(0.0, {}, {1.0}));
    CHECK(equivalent_invariants(s1, s1, 1e-6));
    const HitchinInvariants s2 = invariants(trig(0.0, {}, {2.0}));
    CHECK_FALSE(equivalent_invariants(s1, s2, 1e-6));  // residues halve
}

TEST_CASE("invariants survive pushforward conjugation") {
    const CircleField f = trig(0.0, {}, {1.0});
    CircleDiffeo h;
    h.displacement.a0 = 0.3;
    h.displacement.sin_coeffs = {0.1};
    const HitchinInvariants a = invariants(f);
    const HitchinInvariants b = invariants(pushforward(f, h));
    CHECK(equivalent_invariants(a, b, 1e-5));
}

TEST_CASE("near-ties raise AmbiguousMatch, clear gaps do not") {
    const HitchinInvariants a = synthetic(1, {}, 2 * kTwoPi);
    SUBCASE("inside the buffer") {
        const HitchinInvariants b = synthetic(1, {}, 2 * kTwoPi * (1 + 2e-6));
        CHECK_THROWS_AS((void)equivalent_invariants(a, b, 1e-6),
                        AmbiguousMatch);
    }
    SUBCASE("clearly different") {
        const HitchinInvariants b = synthetic(1, {}, 2 * kTwoPi * (1 + 5e-5));
        CHECK_FALSE(equivalent_invariants(a, b, 1e-6));
    }
    SUBCASE("clearly equal") {
        const HitchinInvariants b = synthetic(1, {}, 2 * kTwoPi * (1 + 5e-7));
        CHECK(equivalent_invariants(a, b, 1e-6));
    }
    SUBCASE("sign of a nonvanishing field separates") {
        const HitchinInvariants b = synthetic(-1, {}, 2 * kTwoPi);
        CHECK_FALSE(equivalent_invariants(a, b, 1e-6));
    }
    SUBCASE("residue near-tie for k = 1") {
        const HitchinInvariants x = synthetic(1, {{1, 2.0}}, 1.0);
        const HitchinInvariants y = synthetic(1, {{1, 2.0 + 3e-6}}, 1.0);
        CHECK_THROWS_AS((void)equivalent_invariants(x, y, 1e-6),
                        AmbiguousMatch);
    }
}

TEST_CASE("reflected fields reverse the cycle, keep values, negate mu") {
    // k = 0: sign flips, mu negates
    const HitchinInvariants pos = invariants(trig(2.0, {}, {}));
    const HitchinInvariants neg = invariants(reflect_field(trig(2.0, {}, {})));
    CHECK(neg.sigma == -pos.sigma);
    CHECK(neg.mu == doctest::Approx(-pos.mu).epsilon(1e-12));

    // k > 0 with an asymmetric zero pattern
    const CircleField f = trig(0.25, {1.0}, {0.3});
    const CircleField g = reflect_field(f);
    const HitchinInvariants fi = invariants(f);
    const HitchinInvariants gi = invariants(g);
    REQUIRE(fi.k == gi.k);
    REQUIRE(fi.k >= 2);
    std::vector<ZeroInvariant> reversed(gi.zero_data.rbegin(),
                                        gi.zero_data.rend());
    CHECK(cyclically_equal(fi.zero_data, reversed, 1e-8));
    CHECK(gi.mu == doctest::Approx(-fi.mu).epsilon(1e-8));
}

TEST_CASE("interval invariants of (1-t^2)/2") {
    const IntervalField X = make_poly_field({0.5, 0.0, -0.5});
    const IntervalInvariants inv = interval_invariants(X);
    REQUIRE(inv.zero_data.size() == 2);
    CHECK(inv.positions[0] == doctest::Approx(-1.0));
    CHECK(inv.positions[1] == doctest::Approx(1.0));
    CHECK(inv.zero_data[0].order == 1);
    CHECK(inv.zero_data[0].residue == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inv.zero_data[1].residue == doctest::Approx(-1.0).epsilon(1e-12));
    REQUIRE(inv.gap_integrals.size() == 1);
    CHECK(std::abs(inv.gap_integrals[0]) < 1e-8);
}

TEST_CASE("interval invariants of (1-t^2)(2+t)/4 match the log oracle") {
    // 1/X = (2/3)/(1-t) + 2/(1+t) - (4/3)/(2+t); finite part of the gap
    // integral with the gap-length normalization comes out -(4/3) ln 3.
    const IntervalField X = make_poly_field({0.5, 0.25, -0.5, -0.25});
    const IntervalInvariants inv = interval_invariants(X);
    REQUIRE(inv.zero_data.size() == 2);
    CHECK(inv.zero_data[0].residue == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(inv.zero_data[1].residue ==
          doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
    REQUIRE(inv.gap_integrals.size() == 1);
    CHECK(inv.gap_integrals[0] ==
          doctest::Approx(-(4.0 / 3.0) * std::log(3.0)).epsilon(1e-8));
}

TEST_CASE("interior zeros contribute middle records") {
    // X = t(t^2-1)/2: zeros -1, 0, 1 with residues 2/(3t^2-1) = 1, -2, 1
    const IntervalField X = make_poly_field({0.0, -0.5, 0.0, 0.5});
    const IntervalInvariants inv = interval_invariants(X);
    REQUIRE(inv.zero_data.size() == 3);
    CHECK(inv.positions[1] == doctest::Approx(0.0));
    CHECK(inv.zero_data[0].residue == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inv.zero_data[1].residue == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(inv.zero_data[2].residue == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interval equivalence compares invariants with optional flip") {
    const IntervalField a = make_poly_field({0.5, 0.25, -0.5, -0.25});
    SUBCASE("reflexive") { CHECK(equivalent_interval(a, a)); }
    SUBCASE("separates different endpoint residues") {
        const IntervalField b = make_poly_field({0.5, 0.0, -0.5});
        CHECK_FALSE(equivalent_interval(a, b));
    }
    SUBCASE("reflection matches only under allow_flip") {
        // -X(-t): coefficients c_j -> (-1)^{j+1} c_j
        const IntervalField r = make_poly_field({-0.5, 0.25, 0.5, -0.25});
        CHECK_FALSE(equivalent_interval(a, r));
        CHECK(equivalent_interval(a, r, 1e-6, /*allow_flip=*/true));
    }
}

TEST_CASE("interval distance flips reverse records and negate gaps") {
    const IntervalInvariants ia =
        interval_invariants(make_poly_field({0.5, 0.25, -0.5, -0.25}));
    const IntervalInvariants ir = interval_invariants(
        make_poly_field({-0.5, 0.25, 0.5, -0.25}));
    CHECK(interval_invariants_distance(ia, ir, true) < 1e-8);
    CHECK(interval_invariants_distance(ia, ir, false) > 1.0);
    CHECK(interval_invariants_distance(ia, ia, false) == 0.0);
}

TEST_CASE("decide_match has a buffer zone") {
    CHECK(decide_match(5e-7, 1e-6));
    CHECK_FALSE(decide_match(5e-6, 1e-6));
    CHECK_THROWS_AS((void)decide_match(2e-6, 1e-6), AmbiguousMatch);
}

TEST_CASE("doubling an interval field matches its symbolic double") {
    // X = t(t^2-1)/2 doubles to sin(2 theta)/4
    const CircleField doubled =
        double_interval(make_poly_field({0.0, -0.5, 0.0, 0.5}));
    const CircleField target = trig(0.0, {}, {0.0, 0.25});
    const HitchinInvariants di = invariants(doubled, 1e-6);
    const HitchinInvariants ti = invariants(target);
    REQUIRE(di.k == 4);
    CHECK(equivalent_invariants(di, ti, 1e-6));
    // endpoint images carry residue 2; interior images carry -2
    CHECK(di.zero_data[0].residue == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(di.zero_data[1].residue == doctest::Approx(-2.0).epsilon(1e-8));
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "slnatlas/circle_field.hpp"
#include "slnatlas/errors.hpp"

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

}  // namespace

TEST_CASE("eval handles values and derivatives of trig polynomials") {
    const CircleField cosf = trig(0.0, {1.0}, {});
    CHECK(cosf.eval(0.0) == doctest::Approx(1.0));
    CHECK(cosf.eval(0.0, 1) == doctest::Approx(0.0));
    CHECK(trig(2.0, {}, {}).eval(1.234) == 2.0);

    // d^4/dtheta^4 sin = sin; d^3 sin = -cos
    const CircleField sinf = trig(0.0, {}, {1.0});
    CHECK(sinf.eval(0.7, 4) == doctest::Approx(std::sin(0.7)));
    CHECK(sinf.eval(0.7, 3) == doctest::Approx(-std::cos(0.7)));
}

TEST_CASE("find_zeros locates roots of exact fields with orders") {
    const auto zc = find_zeros(trig(0.0, {1.0}, {}));
    REQUIRE(zc.size() == 2);
    CHECK(zc[0].theta == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(zc[1].theta == doctest::Approx(3 * kPi / 2).epsilon(1e-12));
    CHECK(zc[0].order == 1);
    CHECK(zc[1].order == 1);

    CHECK(find_zeros(trig(2.0, {}, {})).empty());

    const auto z2 = find_zeros(trig(1.0, {-1.0}, {}));  // 1 - cos
    REQUIRE(z2.size() == 1);
    CHECK(std::abs(z2[0].theta) < 1e-9);
    CHECK(z2[0].order == 2);

    const auto z6 = find_zeros(trig(0.0, {}, {0.0, 0.0, 1.0}));  // sin 3t
    REQUIRE(z6.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(z6[i].theta == doctest::Approx(i * kPi / 3).epsilon(1e-10));
        CHECK(z6[i].order == 1);
    }

    CHECK_THROWS_AS(find_zeros(trig(0.0, {}, {})), IdenticallyZero);
}

TEST_CASE("find_zeros works on sampled fields") {
    SampledCircle s;
    s.depth = 6;
    s.jet = [](double theta) {
        std::vector<double> jet(7);
        for (int j = 0; j <= 6; ++j) {
            switch (j & 3) {
                case 0: jet[j] = std::sin(theta); break;
                case 1: jet[j] = std::cos(theta); break;
                case 2: jet[j] = -std::sin(theta); break;
                default: jet[j] = -std::cos(theta); break;
            }
        }
        return jet;
    };
    CircleField f;
    f.repr = s;
    const auto z = find_zeros(f, 1e-6);
    REQUIRE(z.size() == 2);
    CHECK(std::abs(z[0].theta) < 1e-8);
    CHECK(z[1].theta == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("flow follows the field") {
    CHECK(flow(trig(1.0, {}, {}), 0.0, kPi) == doctest::Approx(kPi));
    CHECK(flow(trig(0.0, {}, {}), 1.0, 5.0) == doctest::Approx(1.0));
    // sin > 0 on (0, pi): trajectories limit onto the zero at pi
    CHECK(std::abs(flow(trig(0.0, {}, {1.0}), kPi / 2, 20.0) - kPi) < 1e-6);
}

TEST_CASE("flow satisfies the group law") {
    const CircleField f = trig(0.4, {0.3}, {-0.2, 0.1});
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int i = 0; i < 10; ++i) {
        const double theta0 = U(rng) + 2.0, s = U(rng), t = U(rng);
        const double two_step = flow(f, flow(f, theta0, s), t);
        const double one_step = flow(f, theta0, s + t);
        CHECK(std::abs(two_step - one_step) < 1e-8);
    }
}

TEST_CASE("pushforward by the identity is the identity") {
    const CircleField f = trig(0.2, {0.7}, {0.1});
    const CircleField g = pushforward(f, CircleDiffeo{});
    for (int i = 0; i < 64; ++i) {
        const double theta = kTwoPi * i / 64;
        CHECK(g.eval(theta) == doctest::Approx(f.eval(theta)).epsilon(1e-11));
    }
}

TEST_CASE("pushforward of a constant field is the map derivative") {
    CircleDiffeo h;
    h.displacement.sin_coeffs = {0.1};  // h = theta + 0.1 sin theta
    const CircleField g = pushforward(trig(1.0, {}, {}), h);
    for (int i = 0; i < 32; ++i) {
        const double phi = kTwoPi * i / 32;
        const double pre = h.inverse(phi);
        CHECK(g.eval(phi) ==
              doctest::Approx(1.0 + 0.1 * std::cos(pre)).epsilon(1e-10));
    }
}

TEST_CASE("pushforward moves zeros forward with orders intact") {
    CircleDiffeo shift;
    shift.displacement.a0 = 0.3;
    const auto z = find_zeros(pushforward(trig(0.0, {}, {1.0}), shift), 1e-6);
    REQUIRE(z.size() == 2);
    CHECK(z[0].theta == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(z[1].theta == doctest::Approx(kPi + 0.3).epsilon(1e-9));
    CHECK(z[0].order == 1);
    CHECK(z[1].order == 1);
}

TEST_CASE("zeros of pushforwards are images of zeros") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int done = 0;
    while (done < 20) {
        TrigPoly p;
        p.a0 = 0.3 * U(rng);
        p.cos_coeffs = {U(rng), 0.4 * U(rng), 0.2 * U(rng)};
        p.sin_coeffs = {U(rng), 0.4 * U(rng), 0.2 * U(rng)};
        const CircleField f = make_trig_field(p);
        std::vector<ZeroDatum> zf;
        try {
            zf = find_zeros(f);
        } catch (const Error&) {
            continue;  // rejection sampling: keep simple-zero fields only
        }
        bool simple = true;
        for (const auto& z : zf) simple = simple && z.order == 1;
        if (!simple) continue;

        CircleDiffeo h;
        h.displacement.a0 = U(rng);
        h.displacement.sin_coeffs = {0.4 * U(rng)};
        h.displacement.cos_coeffs = {0.0, 0.2 * U(rng)};
        const auto zg = find_zeros(pushforward(f, h), 1e-6);
        REQUIRE(zg.size() == zf.size());
        // h is monotone, so image zeros stay sorted up to one cyclic shift
        std::vector<double> expect;
        for (const auto& z : zf) expect.push_back(wrap_angle(h.eval(z.theta)));
        std::sort(expect.begin(), expect.end());
        for (std::size_t i = 0; i < zg.size(); ++i) {
            CHECK(std::abs(zg[i].theta - expect[i]) < 1e-6);
            CHECK(zg[i].order == 1);
        }
        ++done;
    }
}

TEST_CASE("index sum over simple zeros vanishes") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int done = 0;
    while (done < 20) {
        TrigPoly p;
        p.a0 = 0.2 * U(rng);
        p.cos_coeffs = {U(rng), 0.5 * U(rng)};
        p.sin_coeffs = {U(rng), 0.5 * U(rng)};
        const CircleField f = make_trig_field(p);
        std::vector<ZeroDatum> zs;
        try {
            zs = find_zeros(f);
        } catch (const Error&) {
            continue;
        }
        bool simple = !zs.empty();
        for (const auto& z : zs) simple = simple && z.order == 1;
        if (!simple) continue;
        int index = 0;
        for (const auto& z : zs) index += f.eval(z.theta, 1) > 0 ? 1 : -1;
        CHECK(index == 0);
        ++done;
    }
}

TEST_CASE("circle diffeo inverse is a two-sided inverse") {
    CircleDiffeo h;
    h.displacement.a0 = 0.7;
    h.displacement.cos_coeffs = {0.2};
    h.displacement.sin_coeffs = {-0.3, 0.1};
    for (int i = 0; i < 32; ++i) {
        const double phi = kTwoPi * i / 32;
        CHECK(std::abs(wrap_angle(h.eval(h.inverse(phi))) - phi) < 1e-11);
    }
}

TEST_CASE("pushforward rejects non-diffeomorphisms") {
    CircleDiffeo bad;
    bad.displacement.sin_coeffs = {1.5};  // h' = 1 + 1.5 cos dips below 0
    CHECK_THROWS_AS(pushforward(trig(1.0, {}, {}), bad), NotDiffeomorphism);
}

TEST_CASE("double_interval matches the symbolic doubling of (1-t^2)/2") {
    const IntervalField X = make_poly_field({0.5, 0.0, -0.5});
    const CircleField f = double_interval(X);
    for (int i = 1; i < 64; ++i) {
        const double theta = kTwoPi * i / 64;
        CHECK(f.eval(theta) ==
              doctest::Approx(std::sin(theta) / 2).epsilon(1e-10));
    }
    // antisymmetry across the gluing axis, and the matching involution
    for (int i = 1; i < 32; ++i) {
        const double theta = kPi * i / 32;
        CHECK(std::abs(f.eval(kTwoPi - theta) + f.eval(theta)) < 1e-10);
    }
    CHECK(validate_involution(f, Involution{Involution::Kind::Reflection, 0.0}));

    const auto z = find_zeros(f, 1e-6);
    REQUIRE(z.size() == 2);
    CHECK(std::abs(z[0].theta) < 1e-8);
    CHECK(z[1].theta == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("double_interval enforces the endpoint normalization") {
    // X = t - t^3 vanishes at +-1 but X'(+-1) = -2
    CHECK_THROWS_AS(double_interval(make_poly_field({0.0, 1.0, 0.0, -1.0})),
                    EndpointConstraintViolated);
    // wrong domain
    CHECK_THROWS_AS(
        double_interval(make_poly_field({0.0, 1.0}, -1.0, 0.0)),
        EndpointConstraintViolated);
}

TEST_CASE("validate_involution checks the symmetry pointwise") {
    const CircleField sinf = trig(0.0, {}, {1.0});
    const CircleField sin2 = trig(0.0, {}, {0.0, 1.0});
    CHECK(validate_involution(sinf,
                              Involution{Involution::Kind::Reflection, 0.0}));
    CHECK_FALSE(
        validate_involution(sinf, Involution{Involution::Kind::FreeRotation, 0.0}));
    CHECK(validate_involution(sin2,
                              Involution{Involution::Kind::FreeRotation, 0.0}));
    CHECK(validate_involution(sinf, Involution{}));  // identity: always
}

TEST_CASE("wrap_angle reduces into [0, 2pi)") {
    CHECK(wrap_angle(kTwoPi + 0.5) == doctest::Approx(0.5));
    CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
    CHECK(wrap_angle(0.0) == 0.0);
}

#include <doctest.h>

#include <cmath>

#include "slnatlas/series.hpp"

using namespace slnatlas::series;

namespace {

Series exp_series(std::size_t n) {
    Series s(n);
    double f = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        s[j] = 1.0 / f;
        f *= static_cast<double>(j + 1);
    }
    return s;
}

}  // namespace

TEST_CASE("mul truncates the Cauchy product") {
    const Series a{1.0, 1.0};   // 1 + x
    const Series b{1.0, -1.0};  // 1 - x
    const Series c = mul(a, b, 4);
    REQUIRE(c.size() == 4);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == 0.0);
    CHECK(c[2] == -1.0);
    CHECK(c[3] == 0.0);
}

TEST_CASE("recip of 1 - x is the geometric series") {
    const Series g = recip(Series{1.0, -1.0}, 6);
    for (double c : g) CHECK(c == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("recip of exp(x) is exp(-x)") {
    const Series r = recip(exp_series(10), 10);
    double sign = 1.0, fact = 1.0;
    for (std::size_t j = 0; j < 10; ++j) {
        CHECK(r[j] == doctest::Approx(sign / fact).epsilon(1e-13));
        sign = -sign;
        fact *= static_cast<double>(j + 1);
    }
}

TEST_CASE("compose reproduces exp(2x)") {
    const Series c = compose(exp_series(8), Series{0.0, 2.0}, 8);
    double fact = 1.0, pow2 = 1.0;
    for (std::size_t j = 0; j < 8; ++j) {
        CHECK(c[j] == doctest::Approx(pow2 / fact).epsilon(1e-13));
        pow2 *= 2.0;
        fact *= static_cast<double>(j + 1);
    }
}

TEST_CASE("revert is the compositional inverse") {
    const Series f{0.0, 1.0, 0.7, -0.3, 0.1};
    const Series g = revert(f, 9);
    const Series id = compose(f, g, 9);
    CHECK(id[1] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 0; j < 9; ++j) {
        if (j == 1) continue;
        CHECK(std::abs(id[j]) < 1e-12);
    }
}

TEST_CASE("derive shifts and scales coefficients") {
    const Series d = derive(Series{5.0, 3.0, 2.0, 1.0});
    REQUIRE(d.size() == 3);
    CHECK(d[0] == 3.0);
    CHECK(d[1] == 4.0);
    CHECK(d[2] == 3.0);
}

TEST_CASE("eval and eval_deriv agree with a cubic") {
    const Series s{1.0, -2.0, 0.5, 4.0};  // 1 - 2x + x^2/2 + 4x^3
    const double x = 0.3;
    CHECK(eval(s, x) ==
          doctest::Approx(1.0 - 2.0 * x + 0.5 * x * x + 4.0 * x * x * x));
    CHECK(eval_deriv(s, 1, x) ==
          doctest::Approx(-2.0 + x + 12.0 * x * x));
    CHECK(eval_deriv(s, 2, x) == doctest::Approx(1.0 + 24.0 * x));
    CHECK(eval_deriv(s, 3, x) == doctest::Approx(24.0));
}

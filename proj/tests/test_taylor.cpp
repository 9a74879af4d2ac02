#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cohom/errors.hpp"
#include "cohom/taylor.hpp"

using namespace cohom;

TEST_CASE("product and quotient follow Leibniz") {
    Taylor x = Taylor::variable(0.3, 4);
    Taylor s = sin(x), c = cos(x);
    Taylor one = s * s + c * c;
    CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t k = 1; k <= 4; ++k) CHECK(std::fabs(one[k]) < 1e-15);
    Taylor t = s / c;
    Taylor tt = tan(x);
    for (std::size_t k = 0; k <= 4; ++k) CHECK(t[k] == doctest::Approx(tt[k]).epsilon(1e-13));
}

TEST_CASE("exp and log invert") {
    Taylor x = Taylor::variable(1.7, 6);
    Taylor y = log(exp(x));
    CHECK(y[0] == doctest::Approx(1.7));
    CHECK(y[1] == doctest::Approx(1.0));
    for (std::size_t k = 2; k <= 6; ++k) CHECK(std::fabs(y[k]) < 1e-13);
}

TEST_CASE("derivatives of sqrt(r^2+1) at 0") {
    Taylor x = Taylor::variable(0.0, 3);
    Taylor h = sqrt(x * x + 1.0);
    CHECK(h.derivative(0) == doctest::Approx(1.0));
    CHECK(std::fabs(h.derivative(1)) < 1e-15);
    CHECK(h.derivative(2) == doctest::Approx(1.0));
    CHECK(std::fabs(h.derivative(3)) < 1e-15);
}

TEST_CASE("powers") {
    Taylor x = Taylor::variable(2.0, 3);
    Taylor a = pow(x, 3), b = pow(x, 3.0), c = x * x * x;
    Taylor d = pow(x, -2), e = 1.0 / (x * x);
    for (std::size_t k = 0; k <= 3; ++k) {
        CHECK(a[k] == doctest::Approx(c[k]));
        CHECK(b[k] == doctest::Approx(c[k]));
        CHECK(d[k] == doctest::Approx(e[k]));
    }
    Taylor h = pow(x, 0.5), s = sqrt(x);
    for (std::size_t k = 0; k <= 3; ++k) CHECK(h[k] == doctest::Approx(s[k]));
}

TEST_CASE("compose and revert") {
    Taylor g = exp(Taylor::variable(0.0, 5)) - 1.0;  // eps + eps^2/2 + ...
    Taylor inv = revert(g);
    Taylor l = log(1.0 + Taylor::variable(0.0, 5));
    for (std::size_t k = 0; k <= 5; ++k) CHECK(inv[k] == doctest::Approx(l[k]).epsilon(1e-13));
    // sin about 0.5 composed with 0.5 + eps^2
    Taylor f = sin(Taylor::variable(0.5, 5));
    Taylor arg(5, 0.0);
    arg[0] = 0.5;
    arg[2] = 1.0;
    Taylor direct = sin(arg);
    Taylor comp = compose(f, arg);
    for (std::size_t k = 0; k <= 5; ++k) CHECK(comp[k] == doctest::Approx(direct[k]).epsilon(1e-13));
}

TEST_CASE("sqrt at zero with positive order throws") {
    CHECK_THROWS_AS(sqrt(Taylor::variable(0.0, 2)), EvalError);
    CHECK(sqrt(Taylor(0, 0.0)).value() == 0.0);
}

TEST_CASE("Jet3 arithmetic") {
    Jet3 x{0.4, 1, 0, 0};
    Jet3 s = sin(x), c = cos(x);
    Jet3 one = s * s + c * c;
    CHECK(one.v0 == doctest::Approx(1.0));
    CHECK(std::fabs(one.v1) < 1e-15);
    CHECK(std::fabs(one.v2) < 1e-15);
    CHECK(std::fabs(one.v3) < 1e-15);
}

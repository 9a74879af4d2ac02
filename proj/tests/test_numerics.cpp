#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cohom/errors.hpp"
#include "cohom/numerics.hpp"

using namespace cohom;

TEST_CASE("exponential growth") {
    auto tr = rk_integrate([](double, const State& y, State& d) { d[0] = y[0]; }, {1.0}, 0.0, 1.0);
    CHECK(std::fabs(tr.final_state()[0] - std::numbers::e) < 1e-10);
    CHECK(std::fabs(tr.at(0.5)[0] - std::exp(0.5)) < 1e-10);
}

TEST_CASE("pure power-law decay of the linear part") {
    // v' = A v / r with A = diag(0, -2, 0, -1), started away from 0
    Rhs rhs = [](double r, const State& v, State& d) {
        d[0] = 0.0;
        d[1] = -2.0 * v[1] / r;
        d[2] = 0.0;
        d[3] = -v[3] / r;
    };
    auto tr = rk_integrate(rhs, {1.0, 1.0, 2.0, 1.0}, 0.1, 2.0);
    const State v = tr.final_state();
    CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(v[1] - 0.01 / 4.0) < 1e-11);
    CHECK(v[2] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::fabs(v[3] - 0.1 / 2.0) < 1e-11);
}

TEST_CASE("harmonic oscillator energy over 100 periods") {
    RkOptions o;
    o.tol.abs = o.tol.rel = 1e-10;
    auto tr = rk_integrate([](double, const State& y, State& d) { d[0] = y[1]; d[1] = -y[0]; }, {1.0, 0.0}, 0.0,
                           200.0 * std::numbers::pi, o);
    const State v = tr.final_state();
    CHECK(std::fabs(v[0] * v[0] + v[1] * v[1] - 1.0) < 1e-8);
}

TEST_CASE("convergence order under tolerance tightening") {
    // error of y' = -2 r y^2 (y = 1/(1+r^2)) against a fixed step budget
    auto err_for = [](double tol) {
        RkOptions o;
        o.tol.abs = o.tol.rel = tol;
        o.check_dense = false;
        auto tr = rk_integrate([](double r, const State& y, State& d) { d[0] = -2 * r * y[0] * y[0]; }, {1.0}, 0.0,
                               4.0, o);
        return std::pair{std::fabs(tr.final_state()[0] - 1.0 / 17.0), static_cast<double>(tr.steps())};
    };
    auto [e1, n1] = err_for(1e-6);
    auto [e2, n2] = err_for(1e-10);
    const double order = std::log(e1 / e2) / std::log(n2 / n1);
    CHECK(order >= 4.5);
}

TEST_CASE("events stop the integration at the root") {
    RkOptions o;
    o.event = [](double, const State& y) { return y[0]; };
    auto tr = rk_integrate([](double, const State& y, State& d) { d[0] = y[1]; d[1] = -y[0]; }, {1.0, 0.0}, 0.0, 10.0,
                           o);
    CHECK(tr.event_hit());
    CHECK(tr.r_end() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
    CHECK(std::fabs(tr.final_state()[0]) < 1e-10);
}

TEST_CASE("blow-up is reported with the last good abscissa") {
    try {
        rk_integrate([](double, const State& y, State& d) { d[0] = y[0] * y[0]; }, {1.0}, 0.0, 2.0);
        FAIL("expected blow-up");
    } catch (const BlowUpError& e) {
        CHECK(e.last_r() < 1.0);
        CHECK(e.last_r() > 0.99);
    }
}

TEST_CASE("endpoint-singular quadrature") {
    auto a = integrate_sqrt_endpoint([](double t) { return 4.0 * (t - 1.0); }, 1.0, 2.0, true, false);
    CHECK(std::fabs(a - 1.0) < 1e-12);
    auto b = integrate_sqrt_endpoint([](double t) { return t * t - 1.0; }, 1.0, 2.0, true, false);
    CHECK(std::fabs(b - std::acosh(2.0)) < 1e-11);
    CHECK(std::fabs(b - 1.3169578969) < 1e-10);
    auto c = integrate_sqrt_endpoint([](double t) { return (t - 1.0) * (2.0 - t); }, 1.0, 2.0, true, true);
    CHECK(std::fabs(c - std::numbers::pi) < 1e-11);
    CHECK_THROWS_AS(integrate_sqrt_endpoint([](double t) { return std::cos(3 * t); }, 0.0, 2.0, false, false),
                    EvalError);
}

TEST_CASE("plain adaptive quadrature") {
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::numbers::e - 1.0));
}

TEST_CASE("bracketed roots") {
    CHECK(std::fabs(find_root_bracketed([](double x) { return std::cos(x); }, 1.0, 2.0, 1e-14) -
                    std::numbers::pi / 2) < 1e-12);
    CHECK_THROWS_AS(find_root_bracketed([](double x) { return 1.0 + x * x; }, 1.0, 2.0), SolverError);
}

TEST_CASE("linear systems") {
    auto id = solve_linear_3({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, {3, 4, 5});
    CHECK(id.x[0] == 3.0);
    CHECK(id.x[1] == 4.0);
    CHECK(id.x[2] == 5.0);
    CHECK(id.residual == 0.0);
    CHECK_THROWS_AS(solve_linear_3({{{1, 2, 3}, {1, 2, 3}, {0, 1, 1}}}, {1, 1, 1}), SolverError);
    auto s = solve_linear_2({{{2, 1}, {1, 3}}}, {3, 5});
    CHECK(s.x[0] == doctest::Approx(0.8));
    CHECK(s.x[1] == doctest::Approx(1.4));
}

TEST_CASE("finite differences and monotone inversion") {
    auto g = [](double x) { return std::sin(x); };
    CHECK(derivative_fd(g, 0.7) == doctest::Approx(std::cos(0.7)).epsilon(1e-10));
    CHECK(derivative_fd_n(g, 0.7, 2, 1e-2) == doctest::Approx(-std::sin(0.7)).epsilon(1e-7));
    CHECK(derivative_fd_n(g, 0.7, 4, 2e-2) == doctest::Approx(std::sin(0.7)).epsilon(1e-5));
    const double x = invert_monotone([](double t) { return t * t * t + t; }, [](double t) { return 3 * t * t + 1; },
                                     10.0, 0.0, 5.0);
    CHECK(std::fabs(x * x * x + x - 10.0) < 1e-11);
}

TEST_CASE("determinism") {
    auto run = [] {
        return rk_integrate([](double r, const State& y, State& d) { d[0] = std::sin(r * y[0]); }, {1.0}, 0.0, 3.0)
            .final_state()[0];
    };
    CHECK(run() == run());
}

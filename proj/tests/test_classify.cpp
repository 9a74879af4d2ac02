#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cohom/classify.hpp"

using namespace cohom;

namespace {
const double pi = std::numbers::pi;
FamilyParams params(int m, int n, int p, int family) { return make_params(custom_space(m, p), n, family); }
}  // namespace

TEST_CASE("constant profile on family 3") {
    const auto P = params(2, 1, 2, 3);
    const auto rep = classify(P, builtin_homogeneous(P));
    CHECK(rep.vaisman.applicable);
    CHECK(rep.vaisman.value);
    CHECK(rep.gauduchon.value);
    CHECK(rep.gauduchon_constant == doctest::Approx(1.0));
    CHECK(!rep.kahler.value);
    CHECK(rep.lck.value);
    CHECK(rep.strictly_lck.value);
    CHECK(rep.sce_residual < 1e-12);
}

TEST_CASE("non-constant periodic profile is not Vaisman") {
    const auto P = params(2, 1, 2, 3);
    const auto p = closed_form_profile("1", "1+0.1*sin(r)", Domain{-pi, pi}, 3);
    const auto rep = classify(P, p);
    CHECK(!rep.vaisman.value);
    CHECK(rep.strictly_lck.value);
}

TEST_CASE("tautological family") {
    const auto P = params(2, 1, 2, 2);
    const auto p = closed_form_profile("r", "sqrt(r^2+1)", Domain{0.0, 5.0}, 2);
    const auto rep = classify(P, p);
    CHECK(!rep.kahler.value);
    CHECK(!rep.gauduchon.value);
    CHECK(!rep.vaisman.applicable);
    CHECK(!rep.strictly_lck.value);
    CHECK(rep.sce_residual < 1e-8);
}

TEST_CASE("Fubini-Study") {
    const auto P = params(2, 1, 2, 4);
    const auto rep = classify(P, builtin_fubini_study());
    CHECK(rep.kahler.value);
    CHECK(rep.balanced.value);
    CHECK(rep.pluriclosed.value);
    CHECK(rep.gauduchon.value);
    CHECK(rep.csc_constant_estimate == doctest::Approx(24.0).epsilon(1e-10));
    CHECK(csc_residual(P, builtin_fubini_study(), default_grid(builtin_fubini_study()), 24.0) < 1e-8);
}

TEST_CASE("second-Chern-Einstein residual") {
    const auto P1 = params(2, 1, 2, 1);
    const auto hom = builtin_homogeneous(P1);
    const Grid g{-5.0, 5.0, 101};
    CHECK(sce_residual(P1, hom, g) < 1e-12);
    const auto conf = closed_form_profile("1+r^2/10", "1+r^2/10", Domain{}, 1);
    CHECK(sce_residual(P1, conf, g) < 1e-8);
    const auto bad = closed_form_profile("1", "1+0.1*sin(r)", Domain{}, 1);
    CHECK(sce_residual(P1, bad, g) > 0.01);
}

TEST_CASE("constant Chern scalar residual") {
    const auto P = params(3, 1, 3, 1);
    const auto hom = builtin_homogeneous(P);
    CHECK(csc_residual(P, hom, Grid{-1, 1, 11}, 24.0) < 1e-12);
    const auto T = params(2, 1, 2, 2);
    const auto t = closed_form_profile("r", "sqrt(r^2+1)", Domain{0.0, 2.0}, 2);
    // 8 (2r^2+1)/(r^2+1)^2 runs through [8*9/25, 8] on [0, 2]
    const double spread = 8.0 - 72.0 / 25.0;
    for (double c : {0.0, 5.0, 8.0}) CHECK(csc_residual(T, t, Grid{0.0, 2.0, 201}, c) >= spread / 2 - 1e-9);
}

TEST_CASE("default grid insets singular ends") {
    const auto g = default_grid(builtin_fubini_study());
    CHECK(g.count == 401);
    CHECK(g.r0 == doctest::Approx(1e-3 * pi / 2));
    CHECK(g.r1 == doctest::Approx(pi / 2 - 1e-3 * pi / 2));
    const auto h = default_grid(builtin_tautological(1.0));
    CHECK(h.r1 == doctest::Approx(10.0));
}

TEST_CASE("mean of K over a period") {
    const auto P = params(3, 2, 3, 3);
    const auto p = closed_form_profile("1+0.3*cos(r)", "2+0.5*sin(2*r)", Domain{-pi, pi}, 3);
    const Grid g{-pi, pi - 2 * pi / 400, 400};
    const auto pts = evaluate_grid(P, p, g);
    double K = 0, f = 0;
    for (const auto& c : pts) {
        K += c.kahler_residual;
        f += c.f;
    }
    CHECK(K / pts.size() == doctest::Approx(P.q() * f / pts.size()).epsilon(1e-12));
    CHECK(!classify(P, p).kahler.value);
}

TEST_CASE("threads give the same grid") {
    const auto P = params(2, 1, 2, 4);
    const auto a = evaluate_grid(P, builtin_fubini_study_k(2.0), Grid{0.1, 1.4, 97}, 1);
    const auto b = evaluate_grid(P, builtin_fubini_study_k(2.0), Grid{0.1, 1.4, 97}, 4);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].scal_ch == b[i].scal_ch);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cohom/classify.hpp"
#include "cohom/errors.hpp"
#include "cohom/numerics.hpp"
#include "cohom/solvers.hpp"

using namespace cohom;

namespace {
const double pi = std::numbers::pi;
FamilyParams params(int m, int n, int p, int family) { return make_params(custom_space(m, p), n, family); }

double sup_abs(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return s;
}
}  // namespace

TEST_CASE("homogeneous solutions") {
    const auto h = homogeneous_sce(params(2, 1, 2, 3));
    CHECK(h.f(0.3) == 1.0);
    CHECK(h.h(0.3) == 1.0);
    const auto e = homogeneous_sce(make_params(e6(), 1, 1));
    CHECK(e.f(0.0) == doctest::Approx(12.0 / 17.0));
    CHECK(e.h(0.0) == 1.0);
    CHECK_THROWS_AS(homogeneous_sce(params(2, 1, 2, 2)), ValidationError);
    for (int m : {2, 3, 7}) {
        const auto P = params(m, 2, 3, 1);
        CHECK(evaluate_curvature(P, homogeneous_sce(P), 0.0).scal_ch == doctest::Approx(4.0 * m * (m - 1)));
    }
}

TEST_CASE("conformal family and its Chern scalar") {
    const auto P = params(3, 1, 2, 3);
    const int m = 3;
    const auto one = conformal_sce_family(P, parse("1"));
    CHECK(one.lambda(0.4) == doctest::Approx(4.0 * m * (m - 1)));
    const auto two = conformal_sce_family(P, parse("2"));
    CHECK(two.lambda(0.4) == doctest::Approx(1.0 * m * (m - 1)));
    CHECK(evaluate_curvature(P, two.profile, 0.4).scal_ch == doctest::Approx(1.0 * m * (m - 1)));
    const auto w = conformal_sce_family(P, parse("1+0.1*sin(r)"));
    CHECK(sce_residual(P, w.profile, default_grid(w.profile)) < 1e-8);
    for (double r : {-2.0, 0.3, 1.7})
        CHECK(w.lambda(r) == doctest::Approx(evaluate_curvature(P, w.profile, r).scal_ch).epsilon(1e-12));
    CHECK_THROWS_AS(conformal_sce_family(P, parse("sin(r)")), DegenerateProfileError);
    CHECK_THROWS_AS(conformal_sce_family(params(3, 1, 2, 2), parse("1")), ValidationError);
}

TEST_CASE("tautological family") {
    const auto P = params(2, 1, 2, 2);
    const auto t1 = tautological_family(P, 1.0), t2 = tautological_family(P, 2.0);
    CHECK(evaluate_curvature(P, t1, 0.0).scal_ch == doctest::Approx(8.0).epsilon(1e-9));
    double e = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double r = 0.1 * i;
        const double a = evaluate_curvature(P, t2, r).scal_ch;
        const double b = evaluate_curvature(P, t1, r / 2.0).scal_ch / 4.0;
        e = std::max(e, std::fabs(a - b));
    }
    CHECK(e < 1e-10);
    const auto P5 = params(5, 1, 5, 2);
    CHECK(sce_residual(P5, tautological_family(P5, 1.0), Grid{0.01, 5.0, 201}) < 1e-10);
    CHECK_THROWS_AS(tautological_family(params(2, 2, 2, 2), 1.0), ValidationError);
}

TEST_CASE("deformed Fubini-Study family") {
    const auto K = fubini_study_family(2, 1.0);
    const auto P = params(2, 1, 2, 4);
    for (const auto& c : evaluate_grid(P, K, default_grid(K))) CHECK(std::fabs(c.kahler_residual) < 1e-14);
    const auto g = fubini_study_family(2, 2.0);
    const auto rep = classify(P, g);
    CHECK(rep.sce_residual < 1e-8);
    CHECK(!rep.kahler.value);
    CHECK(profile_jets(g, 0.0).f1 == doctest::Approx(1.0));
    CHECK(profile_jets(g, pi / 2).f1 == doctest::Approx(-1.0));
}

TEST_CASE("u families solve their ODE") {
    const UFamily u = u_family(2, -0.4, 2.4, 0.0);
    CHECK(u.branch == UBranch::m2);
    CHECK(u.u(2.0) == doctest::Approx(2.775));
    CHECK(u_family(3, 0.0, 2.0, 0.0).u(1.0) == doctest::Approx(0.0));
    CHECK(u_family(5, 0, 0, 0).branch == UBranch::mgt3);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int m : {2, 3, 4, 5, 8}) {
        for (int trial = 0; trial < 5; ++trial) {
            const UFamily v = u_family(m, U(rng), U(rng), U(rng));
            double res = 0.0, scale = 1.0;
            for (int i = 0; i <= 90; ++i) {
                const double t = 1.0 + 0.1 * i;
                res = std::max(res, std::fabs(v.ode_residual(t)));
                scale = std::max(scale, std::fabs(t * t * v.d2u(t)));
            }
            CHECK(res < 1e-10 * scale);
        }
    }
    CHECK_THROWS_AS(u_family(1, 0, 0, 0), ValidationError);
}

TEST_CASE("second-Chern-Einstein u-family") {
    const auto s = sce_u_family(params(2, 3, 2, 2));
    // -20/3 + 4t + 8/3 t^3
    CHECK(s.u(0.0) == doctest::Approx(-20.0 / 3.0));
    CHECK(s.u(1.0) == doctest::Approx(0.0));
    CHECK(s.d2u(1.0) == doctest::Approx(16.0));
    for (double t : {1.0, 2.0, 5.0}) CHECK(std::fabs(t * s.d2u(t) - 2 * s.du(t) + 8.0) < 1e-11 * (1 + t * t * t));
    for (const auto& sp : list_spaces(5)) {
        for (int n = 1; n <= 5; ++n) {
            auto [u1, du1] = sce_u_exact_at_one(sp.m, n, sp.p);
            CHECK(u1 == Rational::make(0, 1));
            CHECK(du1 == Rational::make(4LL * sp.m * n, sp.p));
        }
    }
}

TEST_CASE("csc coefficients on family 2") {
    const auto c22 = csc_coefficients_m2(params(2, 1, 2, 2), 0.0);
    CHECK(c22.a == doctest::Approx(-0.4));
    CHECK(c22.b == doctest::Approx(2.4));
    const auto c33 = csc_coefficients_m2(params(3, 1, 3, 2), 0.0);
    CHECK(std::fabs(c33.a) < 1e-14);
    CHECK(c33.b == doctest::Approx(2.0));
    const auto P4 = params(4, 1, 4, 2);
    const auto c44 = csc_coefficients_m2(P4, 0.0);
    CHECK(std::fabs(c44.a - c44.a_printed) < 1e-12);
    CHECK(std::fabs(u_family(4, c44.a_printed, c44.b_printed, 0.0).u(1.0)) < 1e-12);
    for (int m : {2, 3, 4, 6})
        for (int n : {1, 2, 3})
            for (double c : {0.0, -1.0, -5.0, -12.5}) {
                // the m = 2, 3 displays take p = m, which is every base of those dimensions
                const auto co = csc_coefficients_m2(params(m, n, m <= 3 ? m : m + 1, 2), c);
                CHECK(std::fabs(co.a - co.a_printed) < 1e-10);
                CHECK(std::fabs(co.b - co.b_printed) < 1e-10);
            }
}

TEST_CASE("second-Chern-Einstein solutions on family 2") {
    const auto P = params(2, 1, 2, 2);
    const auto s = solve_sce_m2(P);
    CHECK(s.length == doctest::Approx(10.0));
    double e = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double r = 0.1 * i;
        e = std::max(e, std::fabs(s.phi(r, 0)[0] - (1 + r * r)));
        e = std::max({e, std::fabs(s.profile.f(r) - r), std::fabs(s.profile.h(r) - std::sqrt(1 + r * r))});
    }
    CHECK(e < 1e-9);
    for (auto [m, n, p] : {std::array{2, 3, 2}, {3, 2, 3}, {4, 1, 4}}) {
        const auto Q = params(m, n, p, 2);
        const auto t = solve_sce_m2(Q);
        const auto b = check_boundary(t.profile, Q);
        CHECK(b.pass);
        CHECK(b.max_defect < 1e-8);
        CHECK(sce_residual(Q, t.profile, default_grid(t.profile)) < 1e-6);
        const Taylor ph = t.phi(0.0, 2);
        CHECK(ph[0] == doctest::Approx(1.0));
        CHECK(std::fabs(ph[1]) < 1e-12);
        CHECK(2 * ph[2] == doctest::Approx(2.0 * m * n / p));
    }
}

TEST_CASE("profile solutions: phi'^2 = u(phi) and the third-derivative accessor") {
    std::vector<ProfileSolution> sols;
    sols.push_back(solve_sce_m2(params(3, 2, 3, 2)));
    sols.push_back(solve_csc_m2(params(3, 1, 3, 2), -1.0));
    sols.push_back(solve_csc_m4(params(3, 1, 3, 4)));
    for (const auto& s : sols) {
        const Grid g = default_grid(s.profile);
        std::vector<double> d, d3;
        double prev = -1.0;
        for (double r : g.points()) {
            const Taylor ph = s.phi(r, 3);
            d.push_back((ph[1] * ph[1] - s.u(ph[0])) / std::max(1.0, s.u(ph[0])));
            CHECK(ph[0] > prev);
            prev = ph[0];
            auto second = [&](double x) { return 2.0 * s.phi(x, 2)[2]; };
            if (r > 1e-2 && r < s.length - 1e-2)
                d3.push_back((6.0 * ph[3] - derivative_fd(second, r, 2e-4)) / std::max(1.0, std::fabs(6.0 * ph[3])));
        }
        CHECK(sup_abs(d) < 1e-12);
        CHECK(sup_abs(d3) < 1e-6);
    }
}

TEST_CASE("constant Chern scalar on family 2") {
    const auto P = params(2, 1, 2, 2);
    const auto s = solve_csc_m2(P, 0.0);
    CHECK(csc_residual(P, s.profile, default_grid(s.profile), 0.0) < 1e-6);
    const auto Q = params(3, 1, 3, 2);
    const auto t = solve_csc_m2(Q, -1.0);
    const auto pts = evaluate_grid(Q, t.profile, default_grid(t.profile));
    CHECK(csc_residual(pts, -1.0) < 1e-6);
    for (const auto& c : pts) CHECK(c.kahler_residual > 0.0);
    const Taylor ph = t.phi(0.0, 2);
    CHECK(std::fabs(ph[0] - 1.0) < 1e-8);
    CHECK(std::fabs(ph[1]) < 1e-8);
    CHECK(std::fabs(2 * ph[2] - 2.0) < 1e-8);
    CHECK_THROWS_AS(solve_csc_m2(params(2, 1, 2, 3), 0.0), ValidationError);
    CHECK_THROWS_AS(solve_csc_m2(P, 40.0), SolverError);
}

TEST_CASE("constant Chern scalar on family 4, m = 3") {
    const auto P = params(3, 1, 3, 4);
    const auto s = solve_csc_m4(P);
    CHECK(s.k_tilde == doctest::Approx(1.33839167533677651).epsilon(1e-12));
    CHECK(s.c == doctest::Approx(39.5718388745).epsilon(1e-9));
    CHECK(s.c > 0.0);
    CHECK(std::fabs(printed::m3_alpha(1, s.k_tilde)) < 1e-8);
    const UFamily& u = *s.ufamily;
    CHECK(std::fabs(u.u(1.0)) < 1e-10);
    CHECK(std::fabs(u.u(s.k_tilde)) < 1e-10);
    CHECK(std::fabs(u.du(1.0) - 4.0) < 1e-10);
    CHECK(std::fabs(u.du(s.k_tilde) + 4.0 / s.k_tilde) < 1e-10);
    CHECK(csc_residual(P, s.profile, default_grid(s.profile), s.c) < 1e-6);
    CHECK(check_boundary(s.profile, P, 1e-6).pass);
    // -16k^10 + 64k^8 log k + 8k^8 + 16k^2 - 8 at n = 1
    for (double k : {1.2, 1.7})
        CHECK(printed::m3_alpha(1, k) == doctest::Approx(-16 * std::pow(k, 10) + 64 * std::pow(k, 8) * std::log(k) +
                                                         8 * std::pow(k, 8) + 16 * k * k - 8));
}

TEST_CASE("m = 3 closed forms against the linear system") {
    for (int n : {1, 2, 3}) {
        const auto P = params(3, n, 3, 4);
        for (double k : {1.5, 2.0, 3.0}) {
            const auto co = csc_m4_coefficients(P, k);
            CHECK(std::fabs(co.a - derived::m3_a(n, k)) < 1e-10);
            CHECK(std::fabs(co.b - derived::m3_b(n, k)) < 1e-10);
            CHECK(std::fabs(co.c - derived::m3_c(n, k)) < 1e-10);
            CHECK(std::fabs(co.c - printed::m3_c(n, k)) < 1e-10);
            // the displayed a(k) is three times the solution of the system
            CHECK(printed::m3_a(n, k) == doctest::Approx(3.0 * co.a).epsilon(1e-12));
            CHECK(co.delta == doctest::Approx(printed::m3_delta_from_alpha(n, k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("m > 3 closing function against the displayed polynomials") {
    for (int m : {4, 5, 7})
        for (int n : {1, 2})
            for (double k : {1.1, 1.5, 2.5}) {
                const int p = m;
                const auto co = csc_m4_coefficients(params(m, n, p, 4), k);
                CHECK(co.delta == doctest::Approx(printed::mgt3_delta_from_alpha(m, n, p, k)).epsilon(1e-9));
                CHECK(std::fabs(co.b - printed::mgt3_b(m, n, p, k)) < 1e-9 * std::max(1.0, std::fabs(co.b)));
                CHECK(printed::mgt3_beta(m, k) > 0.0);
            }
    // third derivative of alpha at 1 for (4, 1, 4): 8*4*11*1*3*5
    auto alpha = [](double k) { return printed::mgt3_alpha(4, 1, 4, k); };
    CHECK(derivative_fd_n(alpha, 1.0, 3, 1e-3) == doctest::Approx(5280.0).epsilon(1e-3));
    CHECK(std::fabs(alpha(1.0)) < 1e-10);
}

TEST_CASE("constant Chern scalar on family 4, m = 4 and m = 2") {
    const auto P = params(4, 1, 4, 4);
    const auto s = solve_csc_m4(P);
    CHECK(s.k_tilde == doctest::Approx(1.25089857081744441).epsilon(1e-12));
    CHECK(s.c == doctest::Approx(69.1474690485).epsilon(1e-9));
    CHECK(csc_residual(P, s.profile, default_grid(s.profile), s.c) < 1e-6);
    const auto Q = params(2, 1, 2, 4);
    const auto t = solve_csc_m4(Q);
    CHECK(t.k_tilde == doctest::Approx(1.51953037028811713).epsilon(1e-12));
    CHECK(csc_residual(Q, t.profile, default_grid(t.profile), t.c) < 1e-6);
    CHECK(check_boundary(t.profile, Q, 1e-6).pass);
    CHECK_THROWS_AS(solve_csc_m4(P, CscM4Options{1.01, 1.05, 10}), SolverError);
}

TEST_CASE("singular IVP: tautological oracle") {
    const auto P = params(2, 1, 2, 2);
    const ScalarFn lam = as_scalar_fn(parse("8*(2*r^2+1)/(r^2+1)^2"));
    const auto ser = sce_local_series(P, 1.0, lam, 8);
    CHECK(ser.coeffs[0] == std::array<double, 4>{1.0, 0.0, 1.0, 0.0});
    for (std::size_t k = 1; k < ser.coeffs.size(); k += 2) {
        CHECK(ser.coeffs[k][0] == 0.0);
        CHECK(ser.coeffs[k][2] == 0.0);
    }
    const auto s = solve_sce_local(P, 1.0, lam);
    CHECK(!s.truncated);
    CHECK(s.length == doctest::Approx(1.0));
    double e = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double r = i / 200.0;
        e = std::max({e, std::fabs(s.profile.f(r) - r), std::fabs(s.profile.h(r) - std::sqrt(1 + r * r))});
    }
    CHECK(e < 1e-8);
    const ProfileJets j = profile_jets(s.profile, 0.5);
    CHECK(j.h2 == doctest::Approx(std::pow(1.25, -1.5)).epsilon(1e-7));
    CHECK(std::fabs(j.f2) < 1e-7);
    CHECK_THROWS_AS(solve_sce_local(params(2, 1, 2, 1), 1.0, lam), ValidationError);
}

TEST_CASE("singular IVP: series orders agree at the handoff") {
    const auto P = params(3, 2, 5, 2);
    const ScalarFn lam = as_scalar_fn(parse("20 - 3*r^2"));
    const double r0 = 1e-3;
    const auto a = sce_local_series(P, 0.8, lam, 8).at(r0), b = sce_local_series(P, 0.8, lam, 10).at(r0);
    for (int i = 0; i < 4; ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-9);
}

TEST_CASE("singular IVP reproduces the family-2 solution") {
    const auto P = params(3, 2, 3, 2);
    const auto ref = solve_sce_m2(P);
    const auto s = solve_sce_local(P, 1.0, sce_m2_lambda(ref, P), SceLocalOptions{8, -1.0, 1.0, 1e-10});
    CHECK(!s.truncated);
    double e = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double r = i / 100.0;
        e = std::max({e, std::fabs(s.profile.f(r) - ref.profile.f(r)), std::fabs(s.profile.h(r) - ref.profile.h(r))});
    }
    CHECK(e < 1e-6);
    for (double r : {0.0, 0.4, 0.9})
        CHECK(sce_m2_lambda(ref, P)(Taylor(0, r)).value() ==
              doctest::Approx(evaluate_curvature(P, ref.profile, r).scal_ch).epsilon(1e-9));
}

TEST_CASE("singular IVP positivity failure truncates") {
    const auto P = params(2, 1, 2, 2);
    const auto s = solve_sce_local(P, 1.0, constant_fn(200.0), SceLocalOptions{8, -1.0, 5.0, 1e-10});
    CHECK(s.truncated);
    CHECK(s.length < 5.0);
}

TEST_CASE("Kahler-Einstein probe") {
    const auto P = params(2, 1, 2, 4);
    const auto rep = probe_ke_m4(P, linspace(0.25, 4.0, 20), linspace(-10.0, 30.0, 20));
    CHECK(rep.closed_cells > 0);
    CHECK(rep.min_defect > 1e-2);
    const auto fs = probe_ke_cell(params(2, 1, 2, 2), 1.0, 6.0, ProbeMode::cp_m);
    CHECK(fs.status == "closed");
    CHECK(fs.defect < 1e-3);
    CHECK(fs.r_star == doctest::Approx(pi / 2).epsilon(1e-3));
    const auto tiny = probe_ke_m4(P, {1e-4}, {0.0, 5.0});
    for (const auto& c : tiny.cells) CHECK(c.status != "closed");
    CHECK(tiny.closed_cells == 0);
    const auto par = probe_ke_m4(P, linspace(0.5, 2.0, 4), linspace(0.0, 10.0, 4), ProbeMode::family4, 3);
    const auto seq = probe_ke_m4(P, linspace(0.5, 2.0, 4), linspace(0.0, 10.0, 4), ProbeMode::family4, 1);
    CHECK(par.min_defect == seq.min_defect);
}

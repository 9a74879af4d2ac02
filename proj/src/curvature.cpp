#include "cohom/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace cohom {

namespace {

double hpow(double h, int m) { return m == 2 ? 1.0 : std::pow(h, 2.0 * (m - 2)); }

}  // namespace

double kahler_residual(const FamilyParams& params, const ProfileJets& j) { return j.h0 * j.h1 + params.q() * j.f0; }

RiemannianRicci riemannian_ricci(const FamilyParams& params, const ProfileJets& j) {
    const double m = params.m(), q = params.q(), ca = params.ca();
    const double f = j.f0, fp = j.f1, fpp = j.f2, h = j.h0, hp = j.h1, hpp = j.h2;
    RiemannianRicci out{};
    out.NN = ca * f * f * (-fpp / f - 2 * (m - 1) * hpp / h);
    out.TT = ca * f * f * (-fpp / f - 2 * (m - 1) * fp * hp / (f * h) + 2 * (m - 1) * q * q * f * f / std::pow(h, 4));
    out.XX = h * h *
             (-hpp / h - fp * hp / (f * h) - (2 * m - 3) * hp * hp / (h * h) - 2 * q * q * f * f / std::pow(h, 4) +
              2 * m / (h * h));
    out.scal = -2 * fpp / f - 4 * (m - 1) * hpp / h - 4 * (m - 1) * fp * hp / (f * h) -
               2 * (m - 1) * (2 * m - 3) * hp * hp / (h * h) + 4 * m * (m - 1) / (h * h) -
               2 * (m - 1) * q * q * f * f / std::pow(h, 4);
    return out;
}

ChernRicci chern_ricci(const FamilyParams& params, const ProfileJets& j) {
    const double m = params.m(), n = params.n, p = params.p(), q = params.q(), ca = params.ca();
    const double f = j.f0, fp = j.f1, fpp = j.f2, h = j.h0, hp = j.h1, hpp = j.h2;
    ChernRicci out{};
    out.ric1_TT = ca * f * f * (-fpp / f + (m - 1) * (-hpp / h + hp * hp / (h * h) - fp * hp / (f * h)));
    out.ric1_XX = h * h * ((2 * m * n / p) * (f / (h * h)) * (fp / f + (m - 1) * hp / h) + 2 * m / (h * h));
    out.ric2_TT = ca * f * f *
                  (-fpp / f + (2 * m * (m - 1) * n / p) * fp / (h * h) +
                   (2 * m * m * (m - 1) * n * n / (p * p)) * f * f / std::pow(h, 4));
    out.ric2_XX = h * h *
                  (-hpp / h + hp * hp / (h * h) - fp * hp / (f * h) + (2 * m * (m - 1) * n / p) * f * hp / std::pow(h, 3) -
                   2 * q * q * f * f / std::pow(h, 4) + 2 * m / (h * h));
    return out;
}

double chern_scalar(const FamilyParams& params, const ProfileJets& j) {
    const double m = params.m(), n = params.n, p = params.p();
    const double f = j.f0, fp = j.f1, fpp = j.f2, h = j.h0, hp = j.h1, hpp = j.h2;
    return -2 * fpp / f - 2 * (m - 1) * hpp / h + 2 * (m - 1) * (hp / h - fp / f) * hp / h + 4 * m * (m - 1) / (h * h) +
           (4 * m * (m - 1) * n / p) * (fp + (m - 1) * f * hp / h) / (h * h);
}

LeeForm lee_form(const FamilyParams& params, const ProfileJets& j) {
    const double m = params.m(), n = params.n, p = params.p(), lam = params.lambda;
    const double K = kahler_residual(params, j);
    const double ratio = j.f0 / (j.h0 * j.h0);
    return {(4 * m * (m - 1) * n / (lam * p)) * ratio * K, (2 * m * n / (lam * p)) * ratio * K};
}

double lee_form_derivative(const FamilyParams& params, const ProfileJets& j) {
    const double m = params.m(), n = params.n, p = params.p(), lam = params.lambda, q = params.q();
    const double C = 4 * m * (m - 1) * n / (lam * p);
    const double K = kahler_residual(params, j);
    const double Kp = j.h1 * j.h1 + j.h0 * j.h2 + q * j.f1;
    const double h = j.h0;
    return C * ((j.f1 * K + j.f0 * Kp) / (h * h) - 2 * j.f0 * K * j.h1 / (h * h * h));
}

LeeDerivative lee_covariant_derivative(const FamilyParams& params, const ProfileJets& j, double theta_jet) {
    const double q = params.q(), lam = params.lambda;
    const double theta = lee_form(params, j).theta_N;
    return {(2 * q / lam) * (j.f0 * theta_jet - j.f1 * theta), (2 * q / lam) * j.f1 * theta,
            (lam / (2 * q)) * (j.h0 * j.h1 / j.f0) * theta};
}

double pluriclosed_coeff(const FamilyParams& params, const ProfileJets& j) {
    return 4 * params.q() * j.f0 * kahler_residual(params, j);
}

double gauduchon_quantity(const FamilyParams& params, const ProfileJets& j) {
    return kahler_residual(params, j) * j.f0 * hpow(j.h0, params.m());
}

double gauduchon_bracket(const FamilyParams& params, const ProfileJets& j) {
    const double q = params.q(), m = params.m();
    const double K = kahler_residual(params, j);
    return K * (j.f1 / j.f0 + 2 * (m - 2) * j.h1 / j.h0) + (j.h0 * j.h2 + j.h1 * j.h1 + q * j.f1);
}

ConnectionTables connection_tables(const FamilyParams& params, const ProfileJets& j) {
    const double q = params.q(), lam = params.lambda;
    const double f = j.f0, fp = j.f1, h = j.h0, hp = j.h1;
    const double a = (2 * q / lam);
    const double b = (2 / lam) * q * q * f * f / (h * h);
    ConnectionTables t;
    auto& D = t.levi_civita;
    D["Y*,X*->T*"] = lam / 2;
    D["Y*,X*->N"] = -(lam / 2) * (h * hp / f) / q;
    D["T*,X*->JX*"] = -b;
    D["N,X*->X*"] = a * f * hp / h;
    D["Y*,T*->JY*"] = lam - b;
    D["T*,T*->N"] = -a * fp;
    D["N,T*->T*"] = a * fp;
    D["Y*,N->Y*"] = a * f * hp / h;
    D["T*,N->T*"] = a * fp;
    D["N,N->N"] = a * fp;
    auto& C = t.chern;
    C["Y*,X*->T*"] = lam / 2;
    C["Y*,X*->N"] = lam / 2;
    C["T*,X*->JX*"] = a * f * hp / h;
    C["N,X*->X*"] = a * f * hp / h;
    C["Y*,T*->JY*"] = lam - b;
    C["T*,T*->N"] = -a * fp;
    C["N,T*->T*"] = a * fp;
    C["Y*,N->Y*"] = -b;
    C["T*,N->T*"] = a * fp;
    C["N,N->N"] = a * fp;
    // T(N, X*) = (nabla - D)_N X* - (nabla - D)_{X*} N, since D is torsion free.
    t.torsion_NX = (C["N,X*->X*"] - D["N,X*->X*"]) - (C["Y*,N->Y*"] - D["Y*,N->Y*"]);
    return t;
}

CurvaturePoint curvature_point(const FamilyParams& params, const ProfileJets& j, double r) {
    CurvaturePoint c;
    c.r = r;
    c.f = j.f0;
    c.h = j.h0;
    c.kahler_residual = kahler_residual(params, j);
    const auto R = riemannian_ricci(params, j);
    c.ric_NN = R.NN;
    c.ric_TT = R.TT;
    c.ric_XX = R.XX;
    c.scal = R.scal;
    const auto C = chern_ricci(params, j);
    c.ric1_TT = C.ric1_TT;
    c.ric1_XX = C.ric1_XX;
    c.ric2_TT = C.ric2_TT;
    c.ric2_XX = C.ric2_XX;
    c.scal_ch = chern_scalar(params, j);
    const auto L = lee_form(params, j);
    c.theta_N = L.theta_N;
    c.torsion_coeff = L.torsion_coeff;
    c.pluriclosed_coeff = pluriclosed_coeff(params, j);
    c.gauduchon_Q = gauduchon_quantity(params, j);
    return c;
}

namespace {

CurvaturePoint combine(const CurvaturePoint& a, const CurvaturePoint& b, double r) {
    // (4a - b)/3 for every field.
    auto x = [](double u, double v) { return (4.0 * u - v) / 3.0; };
    CurvaturePoint c;
    c.r = r;
    c.f = x(a.f, b.f);
    c.h = x(a.h, b.h);
    c.kahler_residual = x(a.kahler_residual, b.kahler_residual);
    c.ric_NN = x(a.ric_NN, b.ric_NN);
    c.ric_TT = x(a.ric_TT, b.ric_TT);
    c.ric_XX = x(a.ric_XX, b.ric_XX);
    c.scal = x(a.scal, b.scal);
    c.ric1_TT = x(a.ric1_TT, b.ric1_TT);
    c.ric1_XX = x(a.ric1_XX, b.ric1_XX);
    c.ric2_TT = x(a.ric2_TT, b.ric2_TT);
    c.ric2_XX = x(a.ric2_XX, b.ric2_XX);
    c.scal_ch = x(a.scal_ch, b.scal_ch);
    c.theta_N = x(a.theta_N, b.theta_N);
    c.torsion_coeff = x(a.torsion_coeff, b.torsion_coeff);
    c.pluriclosed_coeff = x(a.pluriclosed_coeff, b.pluriclosed_coeff);
    c.gauduchon_Q = x(a.gauduchon_Q, b.gauduchon_Q);
    return c;
}

}  // namespace

CurvaturePoint evaluate_curvature(const FamilyParams& params, const MetricProfile& p, double r) {
    const Domain& d = p.domain();
    const double slack = 1e-12 * std::max(1.0, std::fabs(r));
    const bool at_lo = std::isfinite(d.lo) && std::fabs(r - d.lo) <= slack;
    const bool at_hi = std::isfinite(d.hi) && std::fabs(r - d.hi) <= slack;
    if ((at_lo && p.singular_end(false)) || (at_hi && p.singular_end(true))) {
        const double delta = 1e-3 * std::min(1.0, d.length());
        const double dir = at_lo ? 1.0 : -1.0;
        const double end = at_lo ? d.lo : d.hi;
        const CurvaturePoint half = curvature_point(params, profile_jets(p, end + dir * 0.5 * delta), r);
        const CurvaturePoint full = curvature_point(params, profile_jets(p, end + dir * delta), r);
        CurvaturePoint c = combine(half, full, r);
        const ProfileJets j = profile_jets(p, end);
        c.f = j.f0;
        c.h = j.h0;
        c.kahler_residual = kahler_residual(params, j);
        return c;
    }
    return curvature_point(params, profile_jets(p, r), r);
}

}  // namespace cohom

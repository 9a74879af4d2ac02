#include <cmath>
#include <numeric>

#include "cohom/errors.hpp"
#include "cohom/numerics.hpp"
#include "cohom/solvers.hpp"

namespace cohom {

std::string to_string(UBranch b) {
    switch (b) {
        case UBranch::m2: return "m2";
        case UBranch::m3: return "m3";
        case UBranch::mgt3: return "mGT3";
    }
    return "?";
}

Taylor UFamily::basis_a(int m, const Taylor& t) { return pow(t, -2 * m); }

Taylor UFamily::basis_b(int m, const Taylor& t) { return m == 3 ? pow(t, 2) : pow(t, m - 1); }

Taylor UFamily::basis_c(int m, const Taylor& t) {
    if (m == 3) return -0.125 * pow(t, 2) * log(t);
    return pow(t, 2) / (2.0 * (m + 1) * (m - 3));
}

Taylor UFamily::eval(const Taylor& t) const {
    return a * basis_a(m, t) + b * basis_b(m, t) + c * basis_c(m, t) - 2.0;
}

double UFamily::u(double t) const { return eval(Taylor(0, t)).value(); }

double UFamily::du(double t) const { return eval(Taylor::variable(t, 1))[1]; }

double UFamily::d2u(double t) const { return 2.0 * eval(Taylor::variable(t, 2))[2]; }

double UFamily::ode_residual(double t) const {
    Taylor s = eval(Taylor::variable(t, 2));
    return t * t * 2.0 * s[2] + (m + 2) * t * s[1] - 2.0 * m * (m - 1) * s[0] + c * t * t - 4.0 * m * (m - 1);
}

UFamily u_family(int m, double a, double b, double c) {
    if (m < 2) throw ValidationError("u_family needs m >= 2");
    UFamily u;
    u.m = m;
    u.branch = m == 2 ? UBranch::m2 : (m == 3 ? UBranch::m3 : UBranch::mgt3);
    u.a = a;
    u.b = b;
    u.c = c;
    return u;
}

Taylor SCEUFamily::eval(const Taylor& t) const {
    double c0 = -4.0 * m * (n + p) / (p * (m + 1.0));
    double top = 4.0 * (m * n - p) / (p * (m + 1.0));
    return c0 + 4.0 * t + top * pow(t, m + 1);
}

double SCEUFamily::u(double t) const { return eval(Taylor(0, t)).value(); }
double SCEUFamily::du(double t) const { return eval(Taylor::variable(t, 1))[1]; }
double SCEUFamily::d2u(double t) const { return 2.0 * eval(Taylor::variable(t, 2))[2]; }

SCEUFamily sce_u_family(const FamilyParams& params) {
    if (params.family != 2) throw ValidationError("the second-Chern-Einstein u-family lives on family 2");
    return SCEUFamily{params.m(), params.n, params.p()};
}

Rational Rational::make(long long n, long long d) {
    if (d == 0) throw EvalError("rational with zero denominator", 0.0);
    if (d < 0) {
        n = -n;
        d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    return Rational{n / g, d / g};
}

Rational Rational::operator+(const Rational& o) const { return make(num * o.den + o.num * den, den * o.den); }
Rational Rational::operator*(const Rational& o) const { return make(num * o.num, den * o.den); }

std::pair<Rational, Rational> sce_u_exact_at_one(int m, int n, int p) {
    Rational c0 = Rational::make(-4LL * m * (n + p), static_cast<long long>(p) * (m + 1));
    Rational top = Rational::make(4LL * (static_cast<long long>(m) * n - p), static_cast<long long>(p) * (m + 1));
    Rational four = Rational::make(4, 1);
    Rational u1 = c0 + four + top;
    Rational du1 = four + top * Rational::make(m + 1, 1);
    return {u1, du1};
}

CscM2Coefficients csc_coefficients_m2(const FamilyParams& params, double c) {
    if (params.family != 2) throw ValidationError("csc_coefficients_m2 needs family 2");
    int m = params.m();
    double n = params.n, p = params.p();
    Taylor one = Taylor::variable(1.0, 1);
    Taylor A = UFamily::basis_a(m, one), B = UFamily::basis_b(m, one), C = UFamily::basis_c(m, one);
    std::array<std::array<double, 2>, 2> M{{{A[0], B[0]}, {A[1], B[1]}}};
    std::array<double, 2> rhs{2.0 - c * C[0], 4.0 * m * n / p - c * C[1]};
    auto sol = solve_linear_2(M, rhs);
    CscM2Coefficients out;
    out.a = sol.x[0];
    out.b = sol.x[1];
    out.residual = sol.residual;
    if (m == 2) {
        out.a_printed = 2.0 / 5 - c / 30 - 4.0 * n / 5;
        out.b_printed = 8.0 / 5 + c / 5 + 4.0 * n / 5;
    } else if (m == 3) {
        out.a_printed = 0.5 - c / 64 - n / 2;
        out.b_printed = 1.5 + c / 64 + n / 2;
    } else {
        out.a_printed = -((m + 1) * (4.0 * m * (2 * n - p) + 4 * p) + c * p) / (2 * p * (m + 1) * (3.0 * m - 1));
        out.b_printed = (4.0 * m * (m - 3) * (n + p) - c * p) / (p * (3.0 * m - 1) * (m - 3));
    }
    return out;
}

CscM4Coefficients csc_m4_coefficients(const FamilyParams& params, double k) {
    int m = params.m();
    double n = params.n, p = params.p();
    if (!(k > 1.0)) throw ValidationError("closing value k must exceed 1");
    Taylor one = Taylor::variable(1.0, 1), tk = Taylor::variable(k, 1);
    Taylor A1 = UFamily::basis_a(m, one), B1 = UFamily::basis_b(m, one), C1 = UFamily::basis_c(m, one);
    Taylor Ak = UFamily::basis_a(m, tk), Bk = UFamily::basis_b(m, tk), Ck = UFamily::basis_c(m, tk);
    std::array<std::array<double, 3>, 3> M{{{A1[0], B1[0], C1[0]}, {Ak[0], Bk[0], Ck[0]}, {A1[1], B1[1], C1[1]}}};
    std::array<double, 3> rhs{2.0, 2.0, 4.0 * m * n / p};
    auto sol = solve_linear_3(M, rhs);
    CscM4Coefficients out;
    out.a = sol.x[0];
    out.b = sol.x[1];
    out.c = sol.x[2];
    out.residual = sol.residual;
    out.delta = out.a * Ak[1] + out.b * Bk[1] + out.c * Ck[1] + 4.0 * m * n / (k * p);
    return out;
}

namespace printed {

static double m3_den(double k) { return (8.0 * std::log(k) - 1.0) * std::pow(k, 8) + 1.0; }

double m3_a(int n, double k) {
    double L = std::log(k);
    return -2.0 * std::pow(k, 6) * (6.0 * (n - 1) * L * k * k + 3.0 * (k * k - 1)) / m3_den(k);
}

// The printed b(k) line repeats c(k).
double m3_b(int n, double k) { return m3_c(n, k); }

double m3_c(int n, double k) {
    return 32.0 * ((n + 3) * std::pow(k, 8) - 4.0 * std::pow(k, 6) - n + 1) / m3_den(k);
}

double m3_alpha(int n, double k) {
    double L = std::log(k);
    return -4.0 * (n + 3) * std::pow(k, 10) + 32.0 * (n + 1) * std::pow(k, 8) * L - 4.0 * (n - 3) * std::pow(k, 8) +
           32.0 * (n - 1) * k * k * L + 4.0 * (n + 3) * k * k + 4.0 * (n - 3);
}

double m3_delta_from_alpha(int n, double k) { return m3_alpha(n, k) / (k * m3_den(k)); }

static double mgt3_den(int m, int p, double k) {
    return p * (2.0 * (m + 1) * std::pow(k, m - 1) - (3.0 * m - 1) * k * k + (m - 3) * std::pow(k, -2 * m));
}

double mgt3_a(int m, int n, int p, double k) {
    return 2.0 * (2.0 * (m * n - p) * std::pow(k, m - 1) + (m * p - 2.0 * m * n - p) * k * k - p * (m - 3.0)) /
           mgt3_den(m, p, k);
}

double mgt3_b(int m, int n, int p, double k) {
    return 4.0 * (-m * (n + p) * k * k + (m * n - p) * std::pow(k, -2 * m) + (m + 1.0) * p) / mgt3_den(m, p, k);
}

double mgt3_c(int m, int n, int p, double k) {
    double M = m;
    double ct = 2.0 * M * (M + 1) * (M - 3) * (n + p) * std::pow(k, m - 1) - (3 * M - 1) * (M + 1) * (M - 3) * p +
                (M * M * M * (p - 2.0 * n) + M * M * (4.0 * n - 3.0 * p) + M * (6.0 * M * n - p) + 3.0 * p) *
                    std::pow(k, -2 * m);
    return 4.0 * ct / mgt3_den(m, p, k);
}

double mgt3_alpha(int m, int n, int p, double k) {
    double M = m;
    return -4.0 * M * (M - 3) * (n + p) * std::pow(k, 3 * m + 2) +
           4.0 * (M + 1) * ((M - 1) * p + 2.0 * M * n) * std::pow(k, 3 * m) -
           4.0 * (3 * M - 1) * (M * n + p) * std::pow(k, 2 * m + 3) +
           4.0 * (3 * M - 1) * (M * n - p) * std::pow(k, m) + 4.0 * (M + 1) * ((M - 1) * p - 2.0 * M * n) * k * k * k -
           4.0 * M * (M - 3) * (p - n) * k;
}

double mgt3_beta(int m, double k) {
    return 2.0 * (m + 1) * std::pow(k, 3 * m - 1) - (3.0 * m - 1) * std::pow(k, 2 * (m + 1)) + (m - 3.0);
}

double mgt3_delta_from_alpha(int m, int n, int p, double k) {
    return mgt3_alpha(m, n, p, k) / (p * k * k * mgt3_beta(m, k));
}

}  // namespace printed

namespace derived {

double m3_a(int n, double k) {
    double L = std::log(k);
    return -2.0 * std::pow(k, 6) * (2.0 * (n - 1) * k * k * L + k * k - 1.0) / printed::m3_den(k);
}

double m3_b(int n, double k) { return 2.0 - m3_a(n, k); }

double m3_c(int n, double k) { return printed::m3_c(n, k); }

}  // namespace derived

}  // namespace cohom

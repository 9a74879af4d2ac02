#pragma once
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cohom/catalog.hpp"
#include "cohom/expr.hpp"
#include "cohom/profiles.hpp"

namespace cohom {

// ---- u-substitution families ---------------------------------------------

enum class UBranch { m2, m3, mgt3 };

std::string to_string(UBranch b);

// Solutions of t^2 u'' + (m+2) t u' - 2m(m-1) u + c t^2 - 4m(m-1) = 0:
//   m = 2: a t^-4 - 2 + b t - c t^2/6
//   m = 3: a t^-6 - 2 + b t^2 - (c/8) t^2 log t
//   m > 3: a t^-2m - 2 + b t^(m-1) + c t^2/(2(m+1)(m-3))
struct UFamily {
    int m = 2;
    UBranch branch = UBranch::m2;
    double a = 0, b = 0, c = 0;

    Taylor eval(const Taylor& t) const;
    double u(double t) const;
    double du(double t) const;
    double d2u(double t) const;
    // Left side of the ODE at t.
    double ode_residual(double t) const;

    // u = a A + b B + c C - 2
    static Taylor basis_a(int m, const Taylor& t);
    static Taylor basis_b(int m, const Taylor& t);
    static Taylor basis_c(int m, const Taylor& t);
};

UFamily u_family(int m, double a, double b, double c);

// u(t) = -4m(n+p)/(p(m+1)) + 4t + 4(mn-p)/(p(m+1)) t^(m+1); solves t u'' - m u' + 4m = 0.
struct SCEUFamily {
    int m = 2, n = 1, p = 2;
    Taylor eval(const Taylor& t) const;
    double u(double t) const;
    double du(double t) const;
    double d2u(double t) const;
};

SCEUFamily sce_u_family(const FamilyParams& params);

struct Rational {
    long long num = 0, den = 1;
    static Rational make(long long n, long long d);
    Rational operator+(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

// (u(1), u'(1)) of the second-Chern-Einstein family in exact arithmetic.
std::pair<Rational, Rational> sce_u_exact_at_one(int m, int n, int p);

// ---- coefficient systems --------------------------------------------------

struct CscM2Coefficients {
    double a = 0, b = 0;
    double a_printed = 0, b_printed = 0;
    double residual = 0;
};

// u(1) = 0, u'(1) = 4mn/p solved on the basis; printed closed forms alongside.
CscM2Coefficients csc_coefficients_m2(const FamilyParams& params, double c);

struct CscM4Coefficients {
    double a = 0, b = 0, c = 0;
    double delta = 0;  // closing function u'(k) + 4mn/(kp)
    double residual = 0;
};

// u(1) = 0, u(k) = 0, u'(1) = 4mn/p. Throws SolverError if singular.
CscM4Coefficients csc_m4_coefficients(const FamilyParams& params, double k);

// Printed family-4 expressions, evaluated as displayed.
namespace printed {
double m3_a(int n, double k);
double m3_b(int n, double k);
double m3_c(int n, double k);
double m3_alpha(int n, double k);
// Closing-function relation for m = 3: delta = alpha/(k((8 log k - 1)k^8 + 1)).
double m3_delta_from_alpha(int n, double k);
double mgt3_a(int m, int n, int p, double k);
double mgt3_b(int m, int n, int p, double k);
double mgt3_c(int m, int n, int p, double k);
double mgt3_alpha(int m, int n, int p, double k);
double mgt3_beta(int m, double k);
// delta = alpha/(p k^2 beta)
double mgt3_delta_from_alpha(int m, int n, int p, double k);
}  // namespace printed

// Closed forms of the m = 3 family-4 coefficients from the linear system.
namespace derived {
double m3_a(int n, double k);
double m3_b(int n, double k);
double m3_c(int n, double k);
}  // namespace derived

// ---- solutions ------------------------------------------------------------

struct ProfileSolution {
    MetricProfile profile;
    std::string problem;      // sce-m2 | csc-m2 | csc-m4 | sce-local
    double c = 0.0;           // Chern scalar target when constant
    std::string lambda_desc;  // description of lambda (sce problems)
    double k_tilde = 0.0;     // family 4
    double length = 0.0;      // domain length
    bool truncated = false;   // sce-local: positivity or blow-up ended the integration
    std::string note;
    std::function<Taylor(double r, std::size_t order)> phi;  // u-substitution problems
    std::function<double(double t)> u;
    std::optional<UFamily> ufamily;
};

MetricProfile homogeneous_sce(const FamilyParams& params);

struct ConformalSCE {
    MetricProfile profile;
    std::function<double(double)> lambda;  // Chern scalar of the output
};
ConformalSCE conformal_sce_family(const FamilyParams& params, const Expression& phi, Domain domain = {});

MetricProfile tautological_family(const FamilyParams& params, double k);
MetricProfile fubini_study_family(int m, double k);

struct SolveOptions {
    double r_length = 10.0;
    double t_cap = 101.0;
};

ProfileSolution solve_sce_m2(const FamilyParams& params, const SolveOptions& opt = {});
ProfileSolution solve_csc_m2(const FamilyParams& params, double c, const SolveOptions& opt = {});

struct CscM4Options {
    double k_min = 1.01;
    double k_max = 50.0;
    int scan_points = 4000;
};
ProfileSolution solve_csc_m4(const FamilyParams& params, const CscM4Options& opt = {});

struct SceLocalOptions {
    int series_order = 8;
    double handoff = -1.0;  // default 1e-3 min(1, a)
    double horizon = 1.0;
    double tol = 1e-10;
};

struct SingularIVPSeries {
    std::vector<std::array<double, 4>> coeffs;  // v_k for k = 0..N
    std::array<double, 4> at(double r) const;
};

// v' = A v / r + N(r, v), v(0) = (1, 0, a, 0), A = diag(0, -2, 0, -1); v = (f/r, (f/r)', h, h').
SingularIVPSeries sce_local_series(const FamilyParams& params, double a, const ScalarFn& lambda, int order);
ProfileSolution solve_sce_local(const FamilyParams& params, double a, const ScalarFn& lambda,
                                const SceLocalOptions& opt = {}, const std::string& lambda_text = "fn");

// Chern scalar of the sce-m2 family as a function of t = phi: -u'' + m(m-1) u/t^2 + 4m(m-1)/t.
ScalarFn sce_m2_lambda(const ProfileSolution& sol, const FamilyParams& params);

// ---- Kähler-Einstein probe ------------------------------------------------

enum class ProbeMode { family4, cp_m };

struct ProbeCell {
    double a = 0, E = 0;
    std::string status;  // closed | collapse | blowup | no_close
    double defect = 0;
    double r_star = 0;
};

struct ProbeReport {
    std::vector<ProbeCell> cells;
    double min_defect = 0;
    double argmin_a = 0, argmin_E = 0;
    int closed_cells = 0;
};

std::vector<double> linspace(double a, double b, int n);

// Kähler gauge f = -(p/(mn)) h h'; the NN Einstein equation gives
// h''' = -E h' - (2m+1) h' h''/h from h(0) = a, h'(0) = 0, h''(0) = -mn/(pa).
ProbeCell probe_ke_cell(const FamilyParams& params, double a, double E, ProbeMode mode = ProbeMode::family4);
ProbeReport probe_ke_m4(const FamilyParams& params, const std::vector<double>& a_grid,
                        const std::vector<double>& E_grid, ProbeMode mode = ProbeMode::family4, int threads = 1);

}  // namespace cohom

#include "cohom/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cohom/errors.hpp"
#include "cohom/numerics.hpp"

namespace cohom {

namespace {

using SeriesFn = std::function<Taylor(const Taylor&)>;

// Running integral of g over [x_0, x_n] tabulated on uniform Gauss-Legendre panels.
class CumulativeTable {
public:
    CumulativeTable() = default;
    CumulativeTable(std::function<double(double)> g, double a, double b, int panels) : g_(std::move(g)) {
        x_.resize(static_cast<std::size_t>(panels) + 1);
        v_.assign(x_.size(), 0.0);
        for (int i = 0; i <= panels; ++i) x_[static_cast<std::size_t>(i)] = a + (b - a) * i / panels;
        for (std::size_t i = 1; i < x_.size(); ++i) v_[i] = v_[i - 1] + panel(x_[i - 1], x_[i]);
    }

    double total() const { return v_.back(); }
    double x_max() const { return x_.back(); }

    double at(double x) const {
        std::size_t j = locate(x_, x);
        return v_[j] + panel(x_[j], x);
    }

    double inverse(double y) const {
        if (y <= 0.0) return x_.front();
        if (y >= v_.back()) return x_.back();
        std::size_t j = locate(v_, y);
        return invert_monotone([this](double x) { return at(x); }, g_, y, x_[j], x_[j + 1], 1e-15);
    }

private:
    std::function<double(double)> g_;
    std::vector<double> x_, v_;

    static std::size_t locate(const std::vector<double>& v, double x) {
        auto it = std::upper_bound(v.begin(), v.end(), x);
        std::size_t j = static_cast<std::size_t>(std::distance(v.begin(), it));
        return std::clamp<std::size_t>(j, 1, v.size() - 1) - 1;
    }

    double panel(double a, double b) const {
        if (a == b) return 0.0;
        const GaussRule& q = gauss_legendre_32();
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        double s = 0.0;
        for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * g_(c + hw * q.x[i]);
        return s * hw;
    }
};

// (u(t) - u(t_end)) / (t - t_end), with the series quotient close to t_end.
double gap_quotient(const SeriesFn& U, double t_end, double u_end, double t) {
    const double d = t - t_end;
    if (std::fabs(d) < 1e-3) {
        const Taylor s = U(Taylor::variable(t_end, 8));
        double acc = 0.0;
        for (std::size_t k = 8; k >= 1; --k) acc = acc * d + s[k];
        return acc;
    }
    return (U(Taylor(0, t)).value() - u_end) / d;
}

// phi with phi' = sqrt(u(phi)) from phi = 1 at r = 0, increasing; either up to t_cap
// or closing at a second simple zero t_right of u.
class PhiCurve {
public:
    PhiCurve(SeriesFn U, double t_right, bool closes) : U_(std::move(U)), t_right_(t_right), closes_(closes) {
        u_left_ = U_(Taylor(0, 1.0)).value();
        u_right_ = U_(Taylor(0, t_right)).value();
        const double t_mid = closes ? 0.5 * (1.0 + t_right) : t_right;
        const double SL = std::sqrt(t_mid - 1.0);
        left_ = CumulativeTable([this](double s) { return 2.0 / std::sqrt(wl(1.0 + s * s)); }, 0.0, SL, 400);
        L_left_ = left_.total();
        if (closes) {
            const double SR = std::sqrt(t_right - t_mid);
            right_ = CumulativeTable([this](double s) { return 2.0 / std::sqrt(wr(t_right_ - s * s)); }, 0.0, SR, 400);
            L_right_ = right_.total();
        }
    }

    double length() const { return L_left_ + L_right_; }

    // (phi, phi') at r.
    std::pair<double, double> point(double r) const {
        if (!closes_ || r <= L_left_) {
            const double s = left_.inverse(r);
            const double t = 1.0 + s * s;
            return {t, s * std::sqrt(wl(t))};
        }
        const double s = right_.inverse(length() - r);
        const double t = t_right_ - s * s;
        return {t, s * std::sqrt(wr(t))};
    }

    // phi'' = u'(phi)/2 generates the series from (phi, phi').
    Taylor series(double r, std::size_t order) const {
        auto [t0, d0] = point(r);
        Taylor phi(order, 0.0);
        phi[0] = t0;
        if (order >= 1) phi[1] = d0;
        if (order < 2) return phi;
        const Taylor up = differentiate(U_(Taylor::variable(t0, order)));
        for (std::size_t k = 0; k + 2 <= order; ++k) {
            const Taylor g = compose(up.truncated(k), phi.truncated(k));
            phi[k + 2] = g[k] / (2.0 * (k + 1) * (k + 2));
        }
        return phi;
    }

    const SeriesFn& U() const { return U_; }

private:
    SeriesFn U_;
    double t_right_;
    bool closes_;
    double u_left_ = 0, u_right_ = 0;
    CumulativeTable left_, right_;
    double L_left_ = 0, L_right_ = 0;

    double wl(double t) const { return gap_quotient(U_, 1.0, u_left_, t); }
    double wr(double t) const { return -gap_quotient(U_, t_right_, u_right_, t); }
};

enum class Ansatz { sce, csc };

class PhiProfileSource : public ProfileSource {
public:
    PhiProfileSource(std::shared_ptr<const PhiCurve> curve, Ansatz ansatz, double scale)
        : curve_(std::move(curve)), ansatz_(ansatz), scale_(scale) {}

    void series(double r0, std::size_t order, Taylor& f, Taylor& h) const override {
        const Taylor phi = curve_->series(r0, order + 1);
        const Taylor dphi = differentiate(phi).truncated(order);
        const Taylor ph = phi.truncated(order);
        if (ansatz_ == Ansatz::sce) {
            f = scale_ * dphi;
            h = sqrt(ph);
        } else {
            f = scale_ * ph * dphi;
            h = ph;
        }
    }

private:
    std::shared_ptr<const PhiCurve> curve_;
    Ansatz ansatz_;
    double scale_;
};

ProfileSolution build_solution(const FamilyParams& params, SeriesFn U, double t_right, bool closes, Ansatz ansatz,
                               double r_length, const std::string& problem) {
    auto curve = std::make_shared<const PhiCurve>(std::move(U), t_right, closes);
    const double scale = params.p() / (2.0 * params.m() * params.n);
    double L = curve->length();
    if (!closes) L = std::min(L, r_length);
    ProfileSolution sol;
    sol.problem = problem;
    sol.length = L;
    auto src = std::make_shared<PhiProfileSource>(curve, ansatz, scale);
    sol.profile = MetricProfile(ProfileKind::ode_solution, Domain{0.0, L}, src, problem, params.family);
    sol.phi = [curve](double r, std::size_t order) { return curve->series(r, order); };
    const SeriesFn Uc = curve->U();
    sol.u = [Uc](double t) { return Uc(Taylor(0, t)).value(); };
    return sol;
}

void require_family(const FamilyParams& params, std::initializer_list<int> allowed, const char* what) {
    if (std::find(allowed.begin(), allowed.end(), params.family) == allowed.end())
        throw ValidationError(std::string(what) + " is not available on family " + std::to_string(params.family));
}

}  // namespace

MetricProfile homogeneous_sce(const FamilyParams& params) {
    require_family(params, {1, 3}, "the homogeneous second-Chern-Einstein metric");
    return builtin_homogeneous(params);
}

ConformalSCE conformal_sce_family(const FamilyParams& params, const Expression& phi, Domain domain) {
    require_family(params, {1, 3}, "the conformal second-Chern-Einstein family");
    if (!std::isfinite(domain.lo) && !std::isfinite(domain.hi)) domain = builtin_homogeneous(params).domain();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", params.p() / (params.m() * static_cast<double>(params.n)));
    const std::string fs = std::string(buf) + "*(" + phi.to_string() + ")";
    ConformalSCE out{closed_form_profile(parse(fs), phi, domain, params.family), {}};
    const int m = params.m();
    // Chern scalar of (p/(mn) phi, phi).
    out.lambda = [phi, m](double r) {
        const Taylor s = phi.eval(Taylor::variable(r, 2));
        const double v = s[0], d1 = s[1], d2 = 2.0 * s[2];
        return 2.0 * m * (-d2 / v + 2.0 * (m - 1) * (d1 + 1.0) / (v * v));
    };
    return out;
}

MetricProfile tautological_family(const FamilyParams& params, double k) {
    require_family(params, {2}, "the tautological family");
    if (params.m() * params.n != params.p())
        throw ValidationError("the tautological family needs mn = p");
    if (!(k > 0.0)) throw ValidationError("k must be positive");
    return builtin_tautological(k);
}

MetricProfile fubini_study_family(int m, double k) {
    if (m < 2) throw ValidationError("fubini_study_family needs m >= 2");
    if (!(k > 0.0)) throw ValidationError("k must be positive");
    return k == 1.0 ? builtin_fubini_study() : builtin_fubini_study_k(k);
}

ProfileSolution solve_sce_m2(const FamilyParams& params, const SolveOptions& opt) {
    const SCEUFamily u = sce_u_family(params);
    ProfileSolution sol = build_solution(
        params, [u](const Taylor& t) { return u.eval(t); }, opt.t_cap, false, Ansatz::sce, opt.r_length, "sce-m2");
    sol.lambda_desc = "scal_ch = -u''(phi) + m(m-1) u(phi)/phi^2 + 4m(m-1)/phi";
    return sol;
}

ProfileSolution solve_csc_m2(const FamilyParams& params, double c, const SolveOptions& opt) {
    if (params.family != 2) throw ValidationError("solve_csc_m2 needs family 2");
    const CscM2Coefficients co = csc_coefficients_m2(params, c);
    const UFamily u = u_family(params.m(), co.a, co.b, c);
    constexpr int scan = 4000;
    for (int i = 1; i <= scan; ++i) {
        const double t = 1.0 + (opt.t_cap - 1.0) * i / scan;
        if (!(u.u(t) > 0.0) || !(u.du(t) > 0.0))
            throw SolverError("u is not positive and increasing at t = " + std::to_string(t));
    }
    ProfileSolution sol = build_solution(
        params, [u](const Taylor& t) { return u.eval(t); }, opt.t_cap, false, Ansatz::csc, opt.r_length, "csc-m2");
    sol.c = c;
    sol.ufamily = u;
    return sol;
}

ProfileSolution solve_csc_m4(const FamilyParams& params, const CscM4Options& opt) {
    if (params.family != 4) throw ValidationError("solve_csc_m4 needs family 4");
    auto delta = [&](double k) { return csc_m4_coefficients(params, k).delta; };
    const double lk0 = std::log(opt.k_min), lk1 = std::log(opt.k_max);
    double prev_k = 0.0, prev_d = 0.0;
    bool have_prev = false;
    std::optional<std::pair<double, double>> bracket;
    for (int i = 0; i <= opt.scan_points; ++i) {
        const double k = std::exp(lk0 + (lk1 - lk0) * i / opt.scan_points);
        double d;
        try {
            d = delta(k);
        } catch (const SolverError&) {
            have_prev = false;
            continue;
        }
        if (!std::isfinite(d)) {
            have_prev = false;
            continue;
        }
        if (have_prev && prev_d > 0.0 && d <= 0.0) {
            bracket = {prev_k, k};
            break;
        }
        prev_k = k;
        prev_d = d;
        have_prev = true;
    }
    if (!bracket) throw SolverError("closing function has no sign change on the k scan");
    const double kt = find_root_bracketed(delta, bracket->first, bracket->second, 1e-15);
    const CscM4Coefficients co = csc_m4_coefficients(params, kt);
    const UFamily u = u_family(params.m(), co.a, co.b, co.c);
    const double m = params.m(), n = params.n, p = params.p();
    const double defects[4] = {u.u(1.0), u.u(kt), u.du(1.0) - 4 * m * n / p, u.du(kt) + 4 * m * n / (kt * p)};
    for (double d : defects)
        if (!(std::fabs(d) < 1e-10)) throw SolverError("boundary conditions of u fail at the closing value");
    if (!(co.c > 0.0)) throw SolverError("closing value gives a non-positive Chern scalar");
    ProfileSolution sol =
        build_solution(params, [u](const Taylor& t) { return u.eval(t); }, kt, true, Ansatz::csc, 0.0, "csc-m4");
    sol.c = co.c;
    sol.k_tilde = kt;
    sol.ufamily = u;
    return sol;
}

ScalarFn sce_m2_lambda(const ProfileSolution& sol, const FamilyParams& params) {
    if (sol.problem != "sce-m2" || !sol.phi) throw ValidationError("sce_m2_lambda needs an sce-m2 solution");
    const SCEUFamily u = sce_u_family(params);
    const auto phi = sol.phi;
    const double m = params.m();
    return [u, phi, m](const Taylor& x) {
        const std::size_t K = x.order();
        const Taylor ph = phi(std::max(0.0, x[0]), K);
        const Taylor U = u.eval(Taylor::variable(ph[0], K + 2));
        const Taylor u2 = differentiate(differentiate(U)).truncated(K);
        const Taylor uu = U.truncated(K);
        const Taylor lam_t = -1.0 * u2 + m * (m - 1) * uu / pow(Taylor::variable(ph[0], K), 2) +
                             4.0 * m * (m - 1) / Taylor::variable(ph[0], K);
        Taylor d = x;
        d[0] = 0.0;
        Taylor phi_x = compose(ph, d + 0.0);
        return compose(lam_t, phi_x);
    };
}

}  // namespace cohom

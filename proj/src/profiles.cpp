#include "cohom/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cohom/errors.hpp"
#include "cohom/numerics.hpp"

namespace cohom {

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::closed_form: return "closed_form";
        case ProfileKind::builtin: return "builtin";
        case ProfileKind::ode_solution: return "ode_solution";
        case ProfileKind::sampled: return "sampled";
    }
    return "unknown";
}

bool Domain::finite() const { return std::isfinite(lo) && std::isfinite(hi); }

bool Domain::contains(double r, double slack) const { return r >= lo - slack && r <= hi + slack; }

MetricProfile::MetricProfile(ProfileKind kind, Domain domain, std::shared_ptr<const ProfileSource> source,
                             std::string name, std::optional<int> family_hint)
    : kind_(kind), domain_(domain), source_(std::move(source)), name_(std::move(name)), family_hint_(family_hint) {
    if (!(domain_.hi > domain_.lo)) throw ValidationError("profile domain must have lo < hi");
}

void MetricProfile::series(double r, std::size_t order, Taylor& f, Taylor& h) const {
    if (!source_) throw ValidationError("empty profile");
    source_->series(r, order, f, h);
}

double MetricProfile::f(double r) const {
    Taylor f, h;
    series(r, 0, f, h);
    return f.value();
}

double MetricProfile::h(double r) const {
    Taylor f, h;
    series(r, 0, f, h);
    return h.value();
}

bool MetricProfile::singular_end(bool upper) const {
    const double r = upper ? domain_.hi : domain_.lo;
    if (!std::isfinite(r)) return false;
    Taylor f, h;
    series(r, 1, f, h);
    const double scale = std::max({1.0, std::fabs(f[1]), std::fabs(h[1])});
    return std::fabs(f[0]) <= 1e-9 * scale || std::fabs(h[0]) <= 1e-9 * scale;
}

ProfileJets profile_jets(const MetricProfile& p, double r) {
    const Domain& d = p.domain();
    const double slack = 1e-12 * std::max(1.0, std::fabs(r));
    if (!d.contains(r, slack)) throw ValidationError("r = " + std::to_string(r) + " is outside the profile domain");
    Taylor f, h;
    p.series(r, 3, f, h);
    const bool at_end = std::fabs(r - d.lo) <= slack || std::fabs(r - d.hi) <= slack;
    const bool ok = at_end ? (f[0] >= -1e-12 && h[0] >= -1e-12) : (f[0] > 0.0 && h[0] > 0.0);
    if (!ok || !std::isfinite(f[0]) || !std::isfinite(h[0]))
        throw DegenerateProfileError("profile is not positive at r = " + std::to_string(r), r);
    return {f.derivative(0), f.derivative(1), f.derivative(2), f.derivative(3),
            h.derivative(0), h.derivative(1), h.derivative(2), h.derivative(3)};
}

namespace {

class ClosedFormSource : public ProfileSource {
public:
    ClosedFormSource(Expression f, Expression h) : f_(std::move(f)), h_(std::move(h)) {}
    void series(double r0, std::size_t order, Taylor& f, Taylor& h) const override {
        const Taylor x = Taylor::variable(r0, order);
        f = f_.eval(x);
        h = h_.eval(x);
    }

private:
    Expression f_, h_;
};

Domain probe_window(const Domain& d) {
    Domain w = d;
    if (!std::isfinite(w.lo) && !std::isfinite(w.hi)) {
        w.lo = -50.0;
        w.hi = 50.0;
    } else if (!std::isfinite(w.lo)) {
        w.lo = w.hi - 50.0;
    } else if (!std::isfinite(w.hi)) {
        w.hi = w.lo + 50.0;
    }
    return w;
}

}  // namespace

MetricProfile closed_form_profile(const Expression& f, const Expression& h, Domain domain,
                                  std::optional<int> family_hint) {
    MetricProfile p(ProfileKind::closed_form, domain, std::make_shared<ClosedFormSource>(f, h),
                    "f = " + f.to_string() + ", h = " + h.to_string(), family_hint);
    check_positive(p);
    return p;
}

MetricProfile closed_form_profile(const std::string& f, const std::string& h, Domain domain,
                                  std::optional<int> family_hint) {
    return closed_form_profile(parse(f), parse(h), domain, family_hint);
}

void check_positive(const MetricProfile& p) {
    const Domain w = probe_window(p.domain());
    constexpr int n = 1024;
    for (int i = 1; i < n - 1; ++i) {
        const double r = w.lo + (w.hi - w.lo) * i / (n - 1.0);
        double f, h;
        try {
            f = p.f(r);
            h = p.h(r);
        } catch (const EvalError& e) {
            throw DegenerateProfileError(std::string("profile evaluation failed: ") + e.what(), r);
        }
        if (!(f > 0.0) || !(h > 0.0))
            throw DegenerateProfileError("profile is not positive at r = " + std::to_string(r), r);
    }
}

namespace {

MetricProfile builtin(const std::string& name, const std::string& f, const std::string& h, Domain d, int family,
                      const std::map<std::string, double>& b = {}) {
    MetricProfile cf(ProfileKind::builtin, d, std::make_shared<ClosedFormSource>(parse(f, b), parse(h, b)), name,
                     family);
    check_positive(cf);
    return cf;
}

}  // namespace

MetricProfile builtin_homogeneous(const FamilyParams& params) {
    const double f = static_cast<double>(params.p()) / (static_cast<double>(params.m()) * params.n);
    Domain d;
    if (params.family == 3) d = {-std::numbers::pi, std::numbers::pi};
    return builtin("homogeneous", "c", "1", d, params.family, {{"c", f}});
}

MetricProfile builtin_tautological(double k) {
    if (!(k > 0.0)) throw ValidationError("tautological family needs k > 0");
    return builtin("tautological(k=" + std::to_string(k) + ")", "r", "sqrt(r^2 + k^2)",
                   {0.0, std::numeric_limits<double>::infinity()}, 2, {{"k", k}});
}

MetricProfile builtin_fubini_study() {
    return builtin("fubini_study", "sin(2*r)/2", "cos(r)", {0.0, std::numbers::pi / 2}, 4);
}

MetricProfile builtin_fubini_study_k(double k) {
    if (!(k > 0.0)) throw ValidationError("fubini_study_k needs k > 0");
    return builtin("fubini_study_k(k=" + std::to_string(k) + ")", "sin(2*r)/2",
                   "cos(r)*sqrt(sin(r)^2 + k^2*cos(r)^2)", {0.0, std::numbers::pi / 2}, 4, {{"k", k}});
}

MetricProfile builtin_profile(const std::string& name, const FamilyParams& params, double k) {
    if (name == "homogeneous") {
        if (params.family == 2 || params.family == 4)
            throw ValidationError("homogeneous profile is not smooth at a singular orbit (family 2, 4)");
        return builtin_homogeneous(params);
    }
    if (name == "tautological") return builtin_tautological(k);
    if (name == "fubini_study") return builtin_fubini_study();
    if (name == "fubini_study_k") return builtin_fubini_study_k(k);
    throw ValidationError("unknown builtin profile '" + name + "'");
}

// ---- sampled -------------------------------------------------------------

namespace {

struct QuinticSpline {
    std::vector<double> x, y, d1, d2;

    // Derivatives at x[i0] of the degree-5 interpolant through x[i0..i0+5] (or i0-5..i0).
    static std::pair<double, double> end_derivatives(const std::vector<double>& x, const std::vector<double>& y,
                                                     bool upper) {
        const std::size_t n = x.size();
        std::array<std::size_t, 6> idx;
        for (std::size_t j = 0; j < 6; ++j) idx[j] = upper ? n - 1 - j : j;
        const double x0 = x[idx[0]];
        const double s = std::fabs(x[idx[5]] - x0);
        std::array<std::array<double, 6>, 6> A{};
        std::array<double, 6> b{};
        for (std::size_t j = 0; j < 6; ++j) {
            const double t = (x[idx[j]] - x0) / s;
            double pw = 1.0;
            for (std::size_t k = 0; k < 6; ++k) {
                A[j][k] = pw;
                pw *= t;
            }
            b[j] = y[idx[j]];
        }
        const auto sol = solve_linear<6>(A, b);
        return {sol.x[1] / s, 2.0 * sol.x[2] / (s * s)};
    }

    QuinticSpline(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
        const std::size_t n = x.size();
        d1.assign(n, 0.0);
        d2.assign(n, 0.0);
        auto [a1, a2] = end_derivatives(x, y, false);
        auto [b1, b2] = end_derivatives(x, y, true);
        d1[0] = a1;
        d2[0] = a2;
        d1[n - 1] = b1;
        d2[n - 1] = b2;
        if (n == 2) return;
        using M2 = std::array<std::array<double, 2>, 2>;
        using V2 = std::array<double, 2>;
        const std::size_t m = n - 2;
        std::vector<M2> L(m), D(m), U(m);
        std::vector<V2> R(m);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = k + 1;
            const double g = x[i] - x[i - 1], h = x[i + 1] - x[i];
            const double dl = y[i] - y[i - 1], dr = y[i + 1] - y[i];
            const double g2 = g * g, g3 = g2 * g, g4 = g3 * g, h2 = h * h, h3 = h2 * h, h4 = h3 * h;
            L[k] = {{{-24.0 / g2, -3.0 / g}, {-168.0 / g3, -24.0 / g2}}};
            D[k] = {{{-36.0 / g2 + 36.0 / h2, 9.0 / g + 9.0 / h}, {-192.0 / g3 - 192.0 / h3, 36.0 / g2 - 36.0 / h2}}};
            U[k] = {{{24.0 / h2, -3.0 / h}, {-168.0 / h3, 24.0 / h2}}};
            R[k] = {-60.0 * dl / g3 + 60.0 * dr / h3, -360.0 * dl / g4 - 360.0 * dr / h4};
        }
        auto mv = [](const M2& A, const V2& v) { return V2{A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1]}; };
        auto mm = [](const M2& A, const M2& B) {
            M2 C{};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) C[i][j] = A[i][0] * B[0][j] + A[i][1] * B[1][j];
            return C;
        };
        auto inv = [](const M2& A) {
            const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
            if (std::fabs(det) < 1e-300) throw SolverError("quintic spline system is singular");
            return M2{{{A[1][1] / det, -A[0][1] / det}, {-A[1][0] / det, A[0][0] / det}}};
        };
        // Known end values move to the right-hand side.
        {
            const V2 e0{d1[0], d2[0]}, e1{d1[n - 1], d2[n - 1]};
            const V2 a = mv(L[0], e0);
            R[0][0] -= a[0];
            R[0][1] -= a[1];
            const V2 c = mv(U[m - 1], e1);
            R[m - 1][0] -= c[0];
            R[m - 1][1] -= c[1];
        }
        // Block Thomas elimination.
        std::vector<M2> Dp(m);
        std::vector<V2> Rp(m);
        Dp[0] = D[0];
        Rp[0] = R[0];
        for (std::size_t k = 1; k < m; ++k) {
            const M2 w = mm(L[k], inv(Dp[k - 1]));
            const M2 wu = mm(w, U[k - 1]);
            const V2 wr = mv(w, Rp[k - 1]);
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) Dp[k][i][j] = D[k][i][j] - wu[i][j];
                Rp[k][i] = R[k][i] - wr[i];
            }
        }
        std::vector<V2> X(m);
        X[m - 1] = mv(inv(Dp[m - 1]), Rp[m - 1]);
        for (std::size_t k = m - 1; k-- > 0;) {
            const V2 ux = mv(U[k], X[k + 1]);
            X[k] = mv(inv(Dp[k]), V2{Rp[k][0] - ux[0], Rp[k][1] - ux[1]});
        }
        for (std::size_t k = 0; k < m; ++k) {
            d1[k + 1] = X[k][0];
            d2[k + 1] = X[k][1];
        }
    }

    Taylor series(double r, std::size_t order) const {
        auto it = std::upper_bound(x.begin(), x.end(), r);
        std::size_t j = static_cast<std::size_t>(std::distance(x.begin(), it));
        j = std::clamp<std::size_t>(j, 1, x.size() - 1) - 1;
        const double h = x[j + 1] - x[j];
        const double y0 = y[j], y1 = y[j + 1], a0 = h * d1[j], a1 = h * d1[j + 1], s0 = h * h * d2[j],
                     s1 = h * h * d2[j + 1];
        const std::array<double, 6> c = {y0,
                                         a0,
                                         s0 / 2,
                                         -6 * a0 - 4 * a1 - 1.5 * s0 + 0.5 * s1 - 10 * y0 + 10 * y1,
                                         8 * a0 + 7 * a1 + 1.5 * s0 - s1 + 15 * y0 - 15 * y1,
                                         -3 * a0 - 3 * a1 - 0.5 * s0 + 0.5 * s1 - 6 * y0 + 6 * y1};
        Taylor t = Taylor::variable((r - x[j]) / h, order);
        if (order >= 1) t[1] = 1.0 / h;
        Taylor out(order, c[5]);
        for (std::size_t k = 5; k-- > 0;) {
            out = out * t;
            out[0] += c[k];
        }
        return out;
    }
};

class SampledSource : public ProfileSource {
public:
    SampledSource(QuinticSpline f, QuinticSpline h) : f_(std::move(f)), h_(std::move(h)) {}
    void series(double r0, std::size_t order, Taylor& f, Taylor& h) const override {
        f = f_.series(r0, order);
        h = h_.series(r0, order);
    }

private:
    QuinticSpline f_, h_;
};

}  // namespace

MetricProfile sampled_profile(std::vector<double> r, std::vector<double> f, std::vector<double> h,
                              std::optional<int> family_hint) {
    if (r.size() < 6 || f.size() != r.size() || h.size() != r.size())
        throw ValidationError("sampled profile needs at least 6 samples of equal length");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1])) throw ValidationError("sample abscissae must be strictly increasing");
    Domain d{r.front(), r.back()};
    QuinticSpline sf(r, std::move(f)), sh(r, std::move(h));
    return MetricProfile(ProfileKind::sampled, d, std::make_shared<SampledSource>(std::move(sf), std::move(sh)),
                         "sampled(" + std::to_string(r.size()) + " knots)", family_hint);
}

MetricProfile sample_profile(const MetricProfile& src, std::size_t knots) {
    if (!src.domain().finite()) throw ValidationError("sampling needs a finite domain");
    if (knots < 6) throw ValidationError("need at least 6 knots");
    std::vector<double> r(knots), f(knots), h(knots);
    const Domain& d = src.domain();
    for (std::size_t i = 0; i < knots; ++i) {
        r[i] = d.lo + d.length() * static_cast<double>(i) / static_cast<double>(knots - 1);
        f[i] = src.f(r[i]);
        h[i] = src.h(r[i]);
    }
    return sampled_profile(std::move(r), std::move(f), std::move(h), src.family_hint());
}

// ---- boundary ------------------------------------------------------------

BoundaryReport check_boundary(const MetricProfile& p, const FamilyParams& params, double tol) {
    BoundaryReport rep;
    rep.family = params.family;
    const Domain& d = p.domain();
    auto add = [&](const std::string& name, double measured, double target) {
        BoundaryCheck c{name, measured, target, std::fabs(measured - target), false};
        c.pass = c.defect <= tol;
        rep.pass = rep.pass && c.pass;
        rep.max_defect = std::max(rep.max_defect, c.defect);
        rep.checks.push_back(c);
    };
    auto end_checks = [&](double r, double fprime, const std::string& tag) {
        Taylor f, h;
        p.series(r, 3, f, h);
        add("f(" + tag + ")", f.derivative(0), 0.0);
        add("f'(" + tag + ")", f.derivative(1), fprime);
        add("f''(" + tag + ")", f.derivative(2), 0.0);
        add("h'(" + tag + ")", h.derivative(1), 0.0);
    };
    switch (params.family) {
        case 1: break;
        case 2:
            if (d.lo != 0.0) throw ValidationError("family 2 profiles live on [0, R) with the singular orbit at 0");
            end_checks(0.0, 1.0, "0");
            break;
        case 3: {
            if (!d.finite()) throw ValidationError("family 3 profiles need a finite periodic cell");
            Taylor fl, hl, fr, hr;
            p.series(d.lo, 3, fl, hl);
            p.series(d.hi, 3, fr, hr);
            for (std::size_t k = 0; k <= 3; ++k) {
                const std::string tag = k == 0 ? "" : std::string(k, '\'');
                add("f" + tag + " periodicity", fr.derivative(k) - fl.derivative(k), 0.0);
                add("h" + tag + " periodicity", hr.derivative(k) - hl.derivative(k), 0.0);
            }
            break;
        }
        case 4:
            if (!d.finite() || d.lo != 0.0) throw ValidationError("family 4 profiles live on [0, L]");
            end_checks(d.lo, 1.0, "0");
            end_checks(d.hi, -1.0, "L");
            break;
        default: throw ValidationError("family must be in 1..4");
    }
    return rep;
}

// ---- conformal change ------------------------------------------------------

namespace {

class ConformalSource : public ProfileSource {
public:
    ConformalSource(MetricProfile base, ScalarFn phi, double s_lo, double s_hi, double s_base)
        : base_(std::move(base)), phi_(std::move(phi)), s_lo_(s_lo), s_hi_(s_hi) {
        constexpr int panels = 512;
        s_.resize(panels + 1);
        xi_.resize(panels + 1);
        for (int i = 0; i <= panels; ++i) s_[static_cast<std::size_t>(i)] = s_lo + (s_hi - s_lo) * i / panels;
        xi_[0] = 0.0;
        for (std::size_t i = 1; i < s_.size(); ++i) xi_[i] = xi_[i - 1] + panel(s_[i - 1], s_[i]);
        xi_shift_ = xi_at(s_base);
        for (auto& v : xi_) v -= xi_shift_;
        xi_shift_ = 0.0;
    }

    double phi(double s) const { return phi_(Taylor(0, s)).value(); }

    double xi_at(double s) const {
        auto it = std::upper_bound(s_.begin(), s_.end(), s);
        std::size_t j = static_cast<std::size_t>(std::distance(s_.begin(), it));
        j = std::clamp<std::size_t>(j, 1, s_.size() - 1) - 1;
        return xi_[j] - xi_shift_ + panel(s_[j], s);
    }

    double rho_lo() const { return xi_.front(); }
    double rho_hi() const { return xi_.back(); }

    double inverse(double rho) const {
        auto it = std::upper_bound(xi_.begin(), xi_.end(), rho);
        std::size_t j = static_cast<std::size_t>(std::distance(xi_.begin(), it));
        j = std::clamp<std::size_t>(j, 1, xi_.size() - 1) - 1;
        const double lo = s_[j], hi = s_[j + 1];
        rho = std::clamp(rho, xi_[j], xi_[j + 1]);
        return invert_monotone([this](double s) { return xi_at(s); }, [this](double s) { return phi(s); }, rho, lo,
                               hi, 1e-15);
    }

    // Series of xi^{-1} about rho0: s0 + sigma(delta).
    Taylor inverse_series(double rho0, std::size_t order) const {
        const double s0 = inverse(rho0);
        Taylor xi_ser = integrate(phi_(Taylor::variable(s0, order > 0 ? order - 1 : 0)), 0.0);
        xi_ser = xi_ser.truncated(order);
        Taylor sigma = revert(xi_ser);
        sigma[0] = s0;
        return sigma;
    }

    void series(double rho0, std::size_t order, Taylor& f, Taylor& h) const override {
        const Taylor s = inverse_series(rho0, order);
        const double s0 = s[0];
        Taylor fb, hb;
        base_.series(s0, order, fb, hb);
        const Taylor ph = phi_(Taylor::variable(s0, order));
        f = compose(ph * fb, s);
        h = compose(ph * hb, s);
    }

    Taylor inverse_factor(const Taylor& rho) const {
        const Taylor s = inverse_series(rho[0], rho.order());
        const Taylor ph = phi_(Taylor::variable(s[0], rho.order()));
        Taylor d = rho;
        d[0] = 0.0;
        return compose(1.0 / compose(ph, s), d + rho[0]);
    }

private:
    MetricProfile base_;
    ScalarFn phi_;
    double s_lo_, s_hi_;
    std::vector<double> s_, xi_;
    double xi_shift_ = 0.0;

    double panel(double a, double b) const {
        if (a == b) return 0.0;
        const GaussRule& q = gauss_legendre_32();
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        double s = 0.0;
        for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * phi(c + hw * q.x[i]);
        return s * hw;
    }
};

}  // namespace

MetricProfile conformal_reparametrize(const MetricProfile& p, const ScalarFn& phi, const FamilyParams& params,
                                      const std::string& phi_text) {
    const Domain w = probe_window(p.domain());
    constexpr int n = 1024;
    for (int i = 0; i < n; ++i) {
        const double r = w.lo + (w.hi - w.lo) * i / (n - 1.0);
        double v;
        try {
            v = phi(Taylor(0, r)).value();
        } catch (const EvalError& e) {
            throw ValidationError(std::string("conformal factor evaluation failed: ") + e.what());
        }
        if (!(v > 0.0)) throw ValidationError("conformal factor is not positive at r = " + std::to_string(r));
    }
    const double base = w.contains(0.0) ? 0.0 : w.lo;
    auto src = std::make_shared<ConformalSource>(p, phi, w.lo, w.hi, base);
    Domain d{src->rho_lo(), src->rho_hi()};
    std::optional<int> hint = p.family_hint();
    if (!hint) hint = params.family;
    return MetricProfile(ProfileKind::ode_solution, d, src, "conformal(" + p.name() + ", phi = " + phi_text + ")",
                         hint);
}

MetricProfile conformal_reparametrize(const MetricProfile& p, const Expression& phi, const FamilyParams& params) {
    return conformal_reparametrize(p, as_scalar_fn(phi), params, phi.to_string());
}

ScalarFn conformal_inverse_factor(const MetricProfile& conformal_result) {
    auto src = std::dynamic_pointer_cast<const ConformalSource>(conformal_result.source());
    if (!src) throw ValidationError("profile is not the result of a conformal change");
    return [src](const Taylor& rho) { return src->inverse_factor(rho); };
}

}  // namespace cohom

#include <algorithm>
#include <cmath>

#include "cohom/errors.hpp"
#include "cohom/numerics.hpp"
#include "cohom/solvers.hpp"

namespace cohom {

namespace {

struct Coeffs {
    double m, A1, A2, B;
    explicit Coeffs(const FamilyParams& p) {
        m = p.m();
        const double n = p.n, pp = p.p();
        A1 = 2.0 * m * (m - 1) * n / pp;
        A2 = 2.0 * m * m * (m - 1) * n * n / (pp * pp);
        B = 2.0 * p.q() * p.q();
    }
};

// Nonlinear parts of the y- and w-rows (the -2y/r and -w/r terms are the linear part).
template <class T, class R>
std::pair<T, T> nonlinear(const Coeffs& c, const R& r, const T& x, const T& y, const T& z, const T& w, const T& lam) {
    const T z2 = z * z;
    const T ny = c.A1 * x * x / z2 + r * (c.A1 * x * y / z2) + r * r * (c.A2 * x * x * x / (z2 * z2)) -
                 lam * x / (2.0 * c.m);
    const T nw = w * w / z - y * w / x + 2.0 * c.m / z - lam * z / (2.0 * c.m) + r * (c.A1 * x * w / z2) -
                 r * r * (c.B * x * x / (z2 * z));
    return {ny, nw};
}

Taylor poly_at(const std::vector<double>& a, const Taylor& x) {
    Taylor acc(x.order(), 0.0);
    for (std::size_t k = a.size(); k-- > 0;) acc = acc * x + a[k];
    return acc;
}

class SceLocalSource : public ProfileSource {
public:
    SceLocalSource(Coeffs c, ScalarFn lam, SingularIVPSeries ser, double r0, Trajectory traj)
        : c_(c), lam_(std::move(lam)), ser_(std::move(ser)), r0_(r0), traj_(std::move(traj)) {}

    void series(double r1, std::size_t order, Taylor& f, Taylor& h) const override {
        const Taylor rr = Taylor::variable(r1, order);
        Taylor X, Z;
        if (r1 <= r0_) {
            std::vector<double> xs, zs;
            for (const auto& v : ser_.coeffs) {
                xs.push_back(v[0]);
                zs.push_back(v[2]);
            }
            X = poly_at(xs, rr);
            Z = poly_at(zs, rr);
        } else {
            const State s = traj_.at(r1);
            std::array<Taylor, 4> V;
            for (int i = 0; i < 4; ++i) V[i] = Taylor(order, 0.0), V[i][0] = s[i];
            for (std::size_t k = 0; k < order; ++k) {
                std::array<Taylor, 4> T;
                for (int i = 0; i < 4; ++i) T[i] = V[i].truncated(k);
                const Taylor r = rr.truncated(k);
                const Taylor lam = lam_(r);
                auto [ny, nw] = nonlinear(c_, r, T[0], T[1], T[2], T[3], lam);
                const Taylor F[4] = {T[1], -2.0 * T[1] / r + ny, T[3], -1.0 * T[3] / r + nw};
                for (int i = 0; i < 4; ++i) V[i][k + 1] = F[i][k] / (k + 1.0);
            }
            X = V[0];
            Z = V[2];
        }
        f = rr * X;
        h = Z;
    }

private:
    Coeffs c_;
    ScalarFn lam_;
    SingularIVPSeries ser_;
    double r0_;
    Trajectory traj_;
};

}  // namespace

std::array<double, 4> SingularIVPSeries::at(double r) const {
    std::array<double, 4> v{};
    for (std::size_t k = coeffs.size(); k-- > 0;)
        for (int i = 0; i < 4; ++i) v[i] = v[i] * r + coeffs[k][i];
    return v;
}

SingularIVPSeries sce_local_series(const FamilyParams& params, double a, const ScalarFn& lambda, int order) {
    if (!(a > 0.0)) throw ValidationError("initial value a must be positive");
    if (order < 1) throw ValidationError("series order must be at least 1");
    const Coeffs c(params);
    SingularIVPSeries s;
    s.coeffs.push_back({1.0, 0.0, a, 0.0});
    for (int k = 1; k <= order; ++k) {
        const std::size_t K = static_cast<std::size_t>(k - 1);
        std::array<Taylor, 4> V;
        for (int i = 0; i < 4; ++i) {
            V[i] = Taylor(K, 0.0);
            for (std::size_t j = 0; j <= K; ++j) V[i][j] = s.coeffs[j][i];
        }
        const Taylor r = Taylor::variable(0.0, K);
        const Taylor lam = lambda(r);
        auto [ny, nw] = nonlinear(c, r, V[0], V[1], V[2], V[3], lam);
        // (k - A) v_k = [N]_{k-1}, A = diag(0, -2, 0, -1)
        std::array<double, 4> v{V[1][K] / k, ny[K] / (k + 2.0), V[3][K] / k, nw[K] / (k + 1.0)};
        if (k % 2 == 1) v[0] = v[2] = 0.0;
        else v[1] = v[3] = 0.0;
        s.coeffs.push_back(v);
    }
    return s;
}

ProfileSolution solve_sce_local(const FamilyParams& params, double a, const ScalarFn& lambda,
                                const SceLocalOptions& opt, const std::string& lambda_text) {
    if (params.family != 2 && params.family != 4)
        throw ValidationError("solve_sce_local needs a singular orbit (family 2 or 4)");
    const SingularIVPSeries ser = sce_local_series(params, a, lambda, opt.series_order);
    const double r0 = opt.handoff > 0.0 ? opt.handoff : 1e-3 * std::min(1.0, a);
    if (!(opt.horizon > r0)) throw ValidationError("horizon must exceed the handoff radius");
    const Coeffs c(params);
    Rhs rhs = [c, lambda](double r, const State& v, State& d) {
        const double lam = lambda(Taylor(0, r)).value();
        auto [ny, nw] = nonlinear(c, r, v[0], v[1], v[2], v[3], lam);
        d[0] = v[1];
        d[1] = -2.0 * v[1] / r + ny;
        d[2] = v[3];
        d[3] = -v[3] / r + nw;
    };
    RkOptions ro;
    ro.tol.abs = ro.tol.rel = opt.tol;
    ro.event = [](double, const State& v) { return std::min(v[0], v[2]); };
    const auto v0 = ser.at(r0);
    const State y0(v0.begin(), v0.end());
    bool truncated = false;
    std::string note;
    Trajectory traj;
    try {
        traj = rk_integrate(rhs, y0, r0, opt.horizon, ro);
    } catch (const BlowUpError& e) {
        const double stop = r0 + 0.999 * (e.last_r() - r0);
        if (!(stop > r0)) throw;
        traj = rk_integrate(rhs, y0, r0, stop, ro);
        truncated = true;
        note = e.what();
    }
    if (traj.event_hit()) {
        truncated = true;
        note = "positivity of (f, h) fails at r = " + std::to_string(traj.r_end());
    }
    ProfileSolution sol;
    sol.problem = "sce-local";
    sol.lambda_desc = lambda_text;
    sol.truncated = truncated;
    sol.note = note;
    sol.length = traj.r_end();
    auto src = std::make_shared<SceLocalSource>(c, lambda, ser, r0, traj);
    sol.profile = MetricProfile(ProfileKind::ode_solution, Domain{0.0, traj.r_end()}, src, "sce-local", params.family);
    return sol;
}

}  // namespace cohom

#include "cohom/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cohom/errors.hpp"

namespace cohom {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

bool finite(const State& y) {
    for (double v : y)
        if (!std::isfinite(v)) return false;
    return true;
}

double dense_component(double y0, double y1, double h, const std::array<State, 7>& k, std::size_t i, double th) {
    const double r2 = y1 - y0;
    const double r3 = h * k[0][i] - r2;
    const double r4 = r2 - h * k[6][i] - r3;
    const double r5 = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
    const double t1 = 1.0 - th;
    return y0 + th * (r2 + t1 * (r3 + th * (r4 + t1 * r5)));
}

}  // namespace

State Trajectory::at(double r) const {
    if (r_.size() == 1) return y_.front();
    const double lo = r_.front(), hi = r_end_;
    if (r < lo - 1e-12 * std::max(1.0, std::fabs(lo)) || r > hi + 1e-12 * std::max(1.0, std::fabs(hi)))
        throw ValidationError("dense output requested outside the integrated interval");
    r = std::clamp(r, lo, hi);
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    std::size_t j = static_cast<std::size_t>(std::distance(r_.begin(), it));
    j = std::clamp<std::size_t>(j, 1, r_.size() - 1) - 1;
    const double h = r_[j + 1] - r_[j];
    const double th = h > 0 ? (r - r_[j]) / h : 0.0;
    State out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = dense_component(y_[j][i], y_[j + 1][i], h, k_[j], i, th);
    return out;
}

Trajectory rk_integrate(const Rhs& rhs, const State& y0, double r0, double r1, const RkOptions& opt) {
    if (!(r1 > r0)) throw ValidationError("rk_integrate needs r1 > r0");
    if (!(opt.tol.abs > 0 && opt.tol.rel > 0)) throw ValidationError("tolerances must be positive");
    const std::size_t n = y0.size();
    Trajectory tr;
    tr.dim_ = n;
    tr.r_.push_back(r0);
    tr.y_.push_back(y0);
    tr.r_end_ = r0;
    if (!finite(y0)) throw BlowUpError("non-finite initial state", r0);

    std::array<State, 7> k;
    for (auto& v : k) v.assign(n, 0.0);
    State ytmp(n), ynew(n), yerr(n);
    rhs(r0, y0, k[0]);
    if (!finite(k[0])) throw BlowUpError("non-finite derivative", r0);

    auto norm = [&](const State& v, const State& ref) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opt.tol.abs + opt.tol.rel * std::fabs(ref[i]);
            s += (v[i] / sc) * (v[i] / sc);
        }
        return std::sqrt(s / static_cast<double>(std::max<std::size_t>(n, 1)));
    };

    const double span = r1 - r0;
    double h = opt.initial_step;
    if (h <= 0.0) {
        const double dn = norm(y0, y0), fn = norm(k[0], y0);
        h = (dn < 1e-5 || fn < 1e-5) ? 1e-6 : 0.01 * dn / fn;
        h = std::min(h, 0.01 * span);
    }
    const double hmax = opt.max_step > 0.0 ? opt.max_step : span;
    h = std::min(h, hmax);

    double r = r0;
    State y = y0;
    double err_old = 1e-4;
    bool rejected = false;
    double g_prev = opt.event ? opt.event(r0, y0) : 0.0;

    for (long step = 0;; ++step) {
        if (step >= opt.tol.max_steps) throw BlowUpError("step budget exhausted", r);
        bool last = false;
        if (r + h >= r1 || r + 1.01 * h >= r1) {
            h = r1 - r;
            last = true;
        }
        if (h <= 1e-14 * std::max(1.0, std::fabs(r))) throw BlowUpError("step size underflow", r);

        auto stage = [&](State& out, double cr, std::initializer_list<std::pair<int, double>> terms) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = y[i];
                for (const auto& [j, a] : terms) s += h * a * k[static_cast<std::size_t>(j)][i];
                ytmp[i] = s;
            }
            rhs(r + cr * h, ytmp, out);
        };
        stage(k[1], c2, {{0, a21}});
        stage(k[2], c3, {{0, a31}, {1, a32}});
        stage(k[3], c4, {{0, a41}, {1, a42}, {2, a43}});
        stage(k[4], c5, {{0, a51}, {1, a52}, {2, a53}, {3, a54}});
        stage(k[5], 1.0, {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
        rhs(r + h, ynew, k[6]);

        double err;
        if (!finite(ynew) || !finite(k[6])) {
            err = 1e10;
        } else {
            for (std::size_t i = 0; i < n; ++i)
                yerr[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                               e7 * k[6][i]);
            State ref(n);
            for (std::size_t i = 0; i < n; ++i) ref[i] = std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err = norm(yerr, ref);
            if (opt.check_dense) {
                State dd(n);
                for (std::size_t i = 0; i < n; ++i)
                    dd[i] = h *
                            (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] + d6 * k[5][i] +
                             d7 * k[6][i]) /
                            32.0;
                err = std::max(err, norm(dd, ref));
            }
        }

        if (err <= 1.0) {
            tr.r_.push_back(r + h);
            tr.y_.push_back(ynew);
            tr.k_.push_back(k);
            tr.r_end_ = r + h;
            const double r_prev = r;
            r += h;
            y = ynew;
            if (opt.event) {
                const double g = opt.event(r, y);
                if (g_prev == 0.0) {
                    g_prev = g;
                } else if ((g_prev < 0.0) != (g < 0.0) || g == 0.0) {
                    auto G = [&](double s) { return opt.event(s, tr.at(s)); };
                    const double root = g == 0.0 ? r : find_root_bracketed(G, r_prev, r, 1e-15 * std::max(1.0, r));
                    tr.r_end_ = root;
                    tr.event_hit_ = true;
                    return tr;
                }
                g_prev = g;
            }
            k[0] = k[6];
            if (last) return tr;
            double fac = 0.9 * std::pow(err, -0.17) * std::pow(err_old, 0.04);
            if (err == 0.0) fac = 5.0;
            fac = std::clamp(fac, 0.2, 5.0);
            if (rejected) fac = std::min(fac, 1.0);
            h = std::min(h * fac, hmax);
            err_old = std::max(err, 1e-4);
            rejected = false;
        } else {
            const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= fac;
            rejected = true;
            if (!finite(ynew) && h <= 1e-14 * std::max(1.0, std::fabs(r))) throw BlowUpError("solution blew up", r);
        }
    }
}

const GaussRule& gauss_legendre_32() {
    static const GaussRule rule = [] {
        constexpr int n = 32;
        GaussRule g;
        g.x.resize(n);
        g.w.resize(n);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            g.x[static_cast<std::size_t>(i)] = x;
            g.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return g;
    }();
    return rule;
}

namespace {

double gl_panel(const std::function<double(double)>& g, double a, double b) {
    const GaussRule& q = gauss_legendre_32();
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * g(c + hw * q.x[i]);
    return s * hw;
}

double adapt(const std::function<double(double)>& g, double a, double b, double whole, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gl_panel(g, a, m), right = gl_panel(g, m, b);
    const double both = left + right;
    if (std::fabs(both - whole) <= abs_tol || depth >= 40) return both;
    return adapt(g, a, m, left, 0.5 * abs_tol, depth + 1) + adapt(g, m, b, right, 0.5 * abs_tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& g, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    const double whole = gl_panel(g, a, b);
    const double abs_tol = std::max(rel_tol * std::fabs(whole), 1e-300);
    return adapt(g, a, b, whole, abs_tol, 0);
}

double integrate_sqrt_endpoint(const std::function<double(double)>& u, double t0, double t1, bool left_zero,
                               bool right_zero, double rel_tol) {
    if (!(t1 > t0)) throw ValidationError("integrate_sqrt_endpoint needs t1 > t0");
    for (int i = 1; i < 64; ++i) {
        const double t = t0 + (t1 - t0) * i / 64.0;
        if (!(u(t) > 0.0)) throw EvalError("u is not positive on the interior", t);
    }
    if (left_zero && right_zero) {
        const double tm = 0.5 * (t0 + t1);
        return integrate_sqrt_endpoint(u, t0, tm, true, false, rel_tol) +
               integrate_sqrt_endpoint(u, tm, t1, false, true, rel_tol);
    }
    if (left_zero) {
        auto g = [&](double s) { return 2.0 * s / std::sqrt(u(t0 + s * s)); };
        return integrate(g, 0.0, std::sqrt(t1 - t0), rel_tol);
    }
    if (right_zero) {
        auto g = [&](double s) { return 2.0 * s / std::sqrt(u(t1 - s * s)); };
        return integrate(g, 0.0, std::sqrt(t1 - t0), rel_tol);
    }
    return integrate([&](double t) { return 1.0 / std::sqrt(u(t)); }, t0, t1, rel_tol);
}

double find_root_bracketed(const std::function<double(double)>& g, double lo, double hi, double tol, int max_iter) {
    double a = lo, b = hi, fa = g(a), fb = g(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw SolverError("root bracket has no sign change");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * 2.2e-16 * std::fabs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = g(b);
    }
    return b;
}

template <std::size_t N>
LinearSolution<N> solve_linear(const std::array<std::array<double, N>, N>& A, const std::array<double, N>& b) {
    auto M = A;
    auto rhs = b;
    double scale = 0.0;
    for (const auto& row : A)
        for (double v : row) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) throw SolverError("singular linear system");
    std::array<std::size_t, N> perm{};
    for (std::size_t i = 0; i < N; ++i) perm[i] = i;
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        if (std::fabs(M[piv][col]) < 1e-14 * scale) throw SolverError("singular linear system");
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < N; ++r) {
            const double f = M[r][col] / M[col][col];
            for (std::size_t c = col; c < N; ++c) M[r][c] -= f * M[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    LinearSolution<N> out;
    for (std::size_t i = N; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t c = i + 1; c < N; ++c) s -= M[i][c] * out.x[c];
        out.x[i] = s / M[i][i];
    }
    for (std::size_t i = 0; i < N; ++i) {
        double s = -b[i];
        for (std::size_t c = 0; c < N; ++c) s += A[i][c] * out.x[c];
        out.residual = std::max(out.residual, std::fabs(s));
    }
    return out;
}

template LinearSolution<2> solve_linear<2>(const std::array<std::array<double, 2>, 2>&, const std::array<double, 2>&);
template LinearSolution<3> solve_linear<3>(const std::array<std::array<double, 3>, 3>&, const std::array<double, 3>&);
template LinearSolution<4> solve_linear<4>(const std::array<std::array<double, 4>, 4>&, const std::array<double, 4>&);
template LinearSolution<6> solve_linear<6>(const std::array<std::array<double, 6>, 6>&, const std::array<double, 6>&);

LinearSolution<3> solve_linear_3(const std::array<std::array<double, 3>, 3>& A, const std::array<double, 3>& b) {
    return solve_linear<3>(A, b);
}

LinearSolution<2> solve_linear_2(const std::array<std::array<double, 2>, 2>& A, const std::array<double, 2>& b) {
    return solve_linear<2>(A, b);
}

double derivative_fd(const std::function<double(double)>& g, double x, double h) {
    auto central = [&](double s) { return (g(x + s) - g(x - s)) / (2.0 * s); };
    return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double derivative_fd_n(const std::function<double(double)>& g, double x, int order, double h) {
    auto f = [&](int j) { return g(x + j * h); };
    switch (order) {
        case 1: return (-f(2) + 8 * f(1) - 8 * f(-1) + f(-2)) / (12 * h);
        case 2: return (-f(2) + 16 * f(1) - 30 * f(0) + 16 * f(-1) - f(-2)) / (12 * h * h);
        case 3: return (-f(3) + 8 * f(2) - 13 * f(1) + 13 * f(-1) - 8 * f(-2) + f(-3)) / (8 * h * h * h);
        case 4:
            return (-f(3) + 12 * f(2) - 39 * f(1) + 56 * f(0) - 39 * f(-1) + 12 * f(-2) - f(-3)) / (6 * h * h * h * h);
        default: throw ValidationError("finite-difference order must be 1..4");
    }
}

double invert_monotone(const std::function<double(double)>& G, const std::function<double(double)>& dG, double y,
                       double lo, double hi, double tol) {
    double glo = G(lo) - y, ghi = G(hi) - y;
    if (glo > 0.0 || ghi < 0.0) throw ValidationError("value outside the range of the monotone map");
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    double x = lo + (hi - lo) * (-glo) / (ghi - glo);
    for (int it = 0; it < 200; ++it) {
        const double gx = G(x) - y;
        if (gx == 0.0) return x;
        if (gx < 0.0) lo = x;
        else hi = x;
        const double d = dG(x);
        double xn = d > 0.0 ? x - gx / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::fabs(xn - x) <= tol * std::max(1.0, std::fabs(x)) || hi - lo <= tol * std::max(1.0, std::fabs(x)))
            return xn;
        x = xn;
    }
    return x;
}

}  // namespace cohom

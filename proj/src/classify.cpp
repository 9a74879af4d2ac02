#include "cohom/classify.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cohom/errors.hpp"

namespace cohom {

std::vector<double> Grid::points() const {
    if (count < 1) throw ValidationError("grid needs at least one point");
    if (count == 1) return {r0};
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = r0 + (r1 - r0) * i / (count - 1.0);
    out.back() = r1;
    return out;
}

Grid default_grid(const MetricProfile& p) {
    const Domain& d = p.domain();
    double lo = d.lo, hi = d.hi;
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
        lo = -10.0;
        hi = 10.0;
    } else if (!std::isfinite(lo)) {
        lo = hi - 10.0;
    } else if (!std::isfinite(hi)) {
        hi = lo + 10.0;
    }
    const double inset = 1e-3 * (hi - lo);
    if (p.singular_end(false)) lo += inset;
    if (p.singular_end(true)) hi -= inset;
    return {lo, hi, 401};
}

std::vector<CurvaturePoint> evaluate_grid(const FamilyParams& params, const MetricProfile& p, const Grid& g,
                                          int threads) {
    const std::vector<double> rs = g.points();
    std::vector<CurvaturePoint> out(rs.size());
    const std::size_t nt = static_cast<std::size_t>(std::clamp(threads, 1, 64));
    if (nt == 1 || rs.size() < 2 * nt) {
        for (std::size_t i = 0; i < rs.size(); ++i) out[i] = evaluate_curvature(params, p, rs[i]);
        return out;
    }
    std::vector<std::exception_ptr> errs(nt);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < rs.size(); i += nt) out[i] = evaluate_curvature(params, p, rs[i]);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

double sce_residual(const FamilyParams& params, const std::vector<CurvaturePoint>& pts) {
    const double ca = params.ca();
    double s = 0.0;
    for (const auto& c : pts) s = std::max(s, std::fabs(c.ric2_TT / (ca * c.f * c.f) - c.ric2_XX / (c.h * c.h)));
    return s;
}

double sce_residual(const FamilyParams& params, const MetricProfile& p, const Grid& g) {
    // Normalization divides by f^2; at a singular end use the limit of the normalized difference.
    std::vector<double> rs = g.points();
    const double ca = params.ca();
    double s = 0.0;
    const Domain& d = p.domain();
    for (double r : rs) {
        const double slack = 1e-12 * std::max(1.0, std::fabs(r));
        const bool at_lo = std::isfinite(d.lo) && std::fabs(r - d.lo) <= slack && p.singular_end(false);
        const bool at_hi = std::isfinite(d.hi) && std::fabs(r - d.hi) <= slack && p.singular_end(true);
        auto diff_at = [&](double x) {
            const CurvaturePoint c = curvature_point(params, profile_jets(p, x), x);
            return c.ric2_TT / (ca * c.f * c.f) - c.ric2_XX / (c.h * c.h);
        };
        double v;
        if (at_lo || at_hi) {
            const double delta = 1e-3 * std::min(1.0, d.length());
            const double dir = at_lo ? 1.0 : -1.0;
            v = (4.0 * diff_at(r + dir * 0.5 * delta) - diff_at(r + dir * delta)) / 3.0;
        } else {
            v = diff_at(r);
        }
        s = std::max(s, std::fabs(v));
    }
    return s;
}

double csc_residual(const std::vector<CurvaturePoint>& pts, double c) {
    double s = 0.0;
    for (const auto& pt : pts) s = std::max(s, std::fabs(pt.scal_ch - c));
    return s;
}

double csc_residual(const FamilyParams& params, const MetricProfile& p, const Grid& g, double c) {
    return csc_residual(evaluate_grid(params, p, g), c);
}

ClassificationReport classify(const FamilyParams& params, const MetricProfile& p, const Grid& g, double tol,
                              std::optional<double> csc_target, int threads) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    ClassificationReport rep;
    rep.grid = g;
    rep.tol = tol;
    const std::vector<double> rs = g.points();
    const std::vector<CurvaturePoint> pts = evaluate_grid(params, p, g, threads);

    const double q = params.q(), m = params.m();
    double supK = 0, scaleK = 0, supTheta = 0, preTheta = 0, supPc = 0, prePc = 0, supQ = 0, minW = INFINITY;
    double qmin = INFINITY, qmax = -INFINITY, qsum = 0, scal_sum = 0, K_sum = 0;
    double vaisman_sup = 0;
    const double Ctheta = 4 * m * (m - 1) * params.n / (params.lambda * params.p());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& c = pts[i];
        const ProfileJets j = profile_jets(p, rs[i]);
        supK = std::max(supK, std::fabs(c.kahler_residual));
        scaleK = std::max(scaleK, std::fabs(j.h0 * j.h1) + std::fabs(q * j.f0));
        supTheta = std::max(supTheta, std::fabs(c.theta_N));
        preTheta = std::max(preTheta, Ctheta * std::fabs(c.f) / (c.h * c.h));
        supPc = std::max(supPc, std::fabs(c.pluriclosed_coeff));
        prePc = std::max(prePc, 4 * q * std::fabs(c.f));
        supQ = std::max(supQ, std::fabs(c.gauduchon_Q));
        minW = std::min(minW, std::fabs(c.f) * (params.m() == 2 ? 1.0 : std::pow(c.h, 2.0 * (m - 2))));
        qmin = std::min(qmin, c.gauduchon_Q);
        qmax = std::max(qmax, c.gauduchon_Q);
        qsum += c.gauduchon_Q;
        scal_sum += c.scal_ch;
        K_sum += c.kahler_residual;
        if (params.family == 3 && j.f0 > 0.0) {
            const auto D = lee_covariant_derivative(params, j, lee_form_derivative(params, j));
            vaisman_sup = std::max({vaisman_sup, std::fabs(D.DN_N), std::fabs(D.DT_T), std::fabs(D.DY_X_coeff)});
        }
    }
    const double npts = static_cast<double>(pts.size());
    const double kthr = tol * std::max(1.0, scaleK);
    rep.kahler = {supK <= kthr, supK, kthr, true};
    const double bthr = kthr * std::max(1.0, preTheta);
    rep.balanced = {supTheta <= bthr, supTheta, bthr, true};
    const double pthr = kthr * std::max(1.0, prePc);
    rep.pluriclosed = {supPc <= pthr, supPc, pthr, true};
    const double qmean = qsum / npts;
    if (params.family == 2 || params.family == 4) {
        const double thr = tol * minW;
        rep.gauduchon = {supQ <= thr, supQ, thr, true};
        rep.gauduchon_constant = 0.0;
    } else {
        const double spread = (qmax - qmin) / std::max(1.0, std::fabs(qmean));
        rep.gauduchon = {spread <= tol, spread, tol, true};
        rep.gauduchon_constant = qmean;
    }
    if (params.family == 3) {
        const double thr = tol * std::max(1.0, supTheta);
        rep.vaisman = {vaisman_sup <= thr, vaisman_sup, thr, true};
    } else {
        rep.vaisman = {false, 0.0, 0.0, false};
    }
    rep.lck = {true, 0.0, 0.0, true};
    rep.strictly_lck = {params.family == 3 && !rep.kahler.value, 0.0, 0.0, true};
    rep.sce_residual = sce_residual(params, p, g);
    rep.csc_constant_estimate = scal_sum / npts;
    rep.mean_K = K_sum / npts;
    rep.csc_target = csc_target;
    rep.csc_residual = csc_residual(pts, csc_target.value_or(rep.csc_constant_estimate));
    return rep;
}

ClassificationReport classify(const FamilyParams& params, const MetricProfile& p, double tol) {
    return classify(params, p, default_grid(p), tol);
}

}  // namespace cohom

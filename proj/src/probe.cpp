#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "cohom/curvature.hpp"
#include "cohom/errors.hpp"
#include "cohom/numerics.hpp"
#include "cohom/solvers.hpp"

namespace cohom {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    if (n <= 0) return v;
    if (n == 1) return {a};
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1.0));
    return v;
}

namespace {

// f and its first two derivatives from (h, h', h'') under f = -h h'/q; h''' from the Einstein row.
ProfileJets ke_jets(double q, double m, double E, const State& s) {
    const double h = s[0], h1 = s[1], h2 = s[2];
    const double h3 = -E * h1 - (2 * m + 1) * h1 * h2 / h;
    ProfileJets j;
    j.h0 = h;
    j.h1 = h1;
    j.h2 = h2;
    j.h3 = h3;
    j.f0 = -h * h1 / q;
    j.f1 = -(h1 * h1 + h * h2) / q;
    j.f2 = -(3 * h1 * h2 + h * h3) / q;
    return j;
}

}  // namespace

ProbeCell probe_ke_cell(const FamilyParams& params, double a, double E, ProbeMode mode) {
    ProbeCell cell;
    cell.a = a;
    cell.E = E;
    const double q = params.q(), m = params.m(), ca = params.ca();
    const double floor_h = 1e-3 * a;
    Rhs rhs = [m, E](double, const State& y, State& d) {
        d[0] = y[1];
        d[1] = y[2];
        d[2] = -E * y[1] - (2 * m + 1) * y[1] * y[2] / y[0];
    };
    RkOptions ro;
    ro.tol.abs = ro.tol.rel = 1e-11;
    ro.tol.max_steps = 400000;
    const double r_start = 1e-2 * std::min(1.0, a);
    const double r_max = 100.0;
    Trajectory lead, tail;
    try {
        lead = rk_integrate(rhs, {a, 0.0, -q / a}, 0.0, r_start, ro);
        ro.event = [floor_h](double, const State& y) { return std::min(y[0] - floor_h, -y[1]); };
        tail = rk_integrate(rhs, lead.final_state(), r_start, r_max, ro);
    } catch (const BlowUpError&) {
        cell.status = "blowup";
        return cell;
    }
    if (!tail.event_hit()) {
        cell.status = "no_close";
        return cell;
    }
    const double rs = tail.r_end();
    const State end = tail.final_state();
    const bool collapsed = end[0] <= floor_h * (1.0 + 1e-9);
    cell.r_star = rs;
    const bool closes = mode == ProbeMode::family4 ? !collapsed : collapsed;
    if (!closes) {
        cell.status = collapsed ? "collapse" : "no_close";
        return cell;
    }
    cell.status = "closed";
    // Einstein residual of all three Ricci rows on interior midpoints.
    double res = 0.0;
    constexpr int samples = 64;
    for (int i = 0; i < samples; ++i) {
        const double r = rs * (i + 0.5) / samples;
        const State s = r <= r_start ? lead.at(r) : tail.at(r);
        const ProfileJets j = ke_jets(q, m, E, s);
        const RiemannianRicci ric = riemannian_ricci(params, j);
        const double gNN = ca * j.f0 * j.f0, gXX = j.h0 * j.h0;
        res = std::max({res, std::fabs(ric.NN / gNN - E), std::fabs(ric.TT / gNN - E), std::fabs(ric.XX / gXX - E)});
    }
    const ProfileJets j = ke_jets(q, m, E, end);
    const double target_h1 = mode == ProbeMode::family4 ? 0.0 : -std::sqrt(q);
    const double d1 = j.f1 + 1.0, d2 = j.h1 - target_h1;
    cell.defect = std::sqrt(d1 * d1 + d2 * d2 + res * res);
    if (!std::isfinite(cell.defect)) cell.status = "blowup";
    return cell;
}

ProbeReport probe_ke_m4(const FamilyParams& params, const std::vector<double>& a_grid,
                        const std::vector<double>& E_grid, ProbeMode mode, int threads) {
    if (mode == ProbeMode::family4 && params.family != 4) throw ValidationError("probe_ke_m4 needs family 4");
    if (a_grid.empty() || E_grid.empty()) throw ValidationError("probe grids must be non-empty");
    for (double a : a_grid)
        if (!(a > 0.0)) throw ValidationError("probe values of a must be positive");
    ProbeReport rep;
    rep.cells.resize(a_grid.size() * E_grid.size());
    const std::size_t total = rep.cells.size();
    auto work = [&](std::size_t start, std::size_t stride) {
        for (std::size_t i = start; i < total; i += stride)
            rep.cells[i] = probe_ke_cell(params, a_grid[i / E_grid.size()], E_grid[i % E_grid.size()], mode);
    };
    const std::size_t nt = static_cast<std::size_t>(std::max(1, threads));
    if (nt == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(work, t, nt);
        for (auto& t : pool) t.join();
    }
    rep.min_defect = std::numeric_limits<double>::infinity();
    for (const auto& c : rep.cells) {
        if (c.status != "closed") continue;
        ++rep.closed_cells;
        if (c.defect < rep.min_defect) {
            rep.min_defect = c.defect;
            rep.argmin_a = c.a;
            rep.argmin_E = c.E;
        }
    }
    return rep;
}

}  // namespace cohom

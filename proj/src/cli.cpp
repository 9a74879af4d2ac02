#include "cohom/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <numbers>

#include "cohom/classify.hpp"
#include "cohom/errors.hpp"
#include "cohom/solvers.hpp"

namespace cohom::cli {

using json = nlohmann::ordered_json;

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{"r",        "f",        "h",        "K",       "ric_NN",
                                               "ric_TT",   "ric_XX",   "scal",     "ric1_TT", "ric1_XX",
                                               "ric2_TT",  "ric2_XX",  "scal_ch",  "theta_N", "torsion_coeff",
                                               "pluriclosed_coeff",    "gauduchon_Q"};
    return cols;
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Flags {
    std::string job, out, space, builtin, f, h, lambda, mode;
    int m = 2, p = 2, n = 1, family = 1, space_k = 0, k1 = 0, k2 = 0, threads = 1, order = 8, max_param = 6;
    double k = 1.0, c = 0.0, a = 1.0, tol = 1e-8, horizon = 1.0, csc = 0.0, r_length = 10.0, t_cap = 101.0,
           k_max = 50.0;
    std::vector<std::string> domain;
    std::vector<double> grid, a_grid, E_grid;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return nullptr;
    return v > 0 ? "inf" : "-inf";
}

// ---- job access -----------------------------------------------------------

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ValidationError("unknown key '" + it.key() + "' in " + where);
    }
}

template <class T>
T get_or(const json& j, const char* key, T def, const std::string& where) {
    if (!j.contains(key)) return def;
    try {
        if constexpr (std::is_same_v<T, int>) {
            const double v = j.at(key).get<double>();
            if (v != std::floor(v)) throw ValidationError(where + "." + key + " must be an integer");
            return static_cast<int>(v);
        } else {
            return j.at(key).get<T>();
        }
    } catch (const json::exception&) {
        throw ValidationError(where + "." + key + " has the wrong type");
    }
}

double bound_value(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) throw ValidationError("domain bounds must be numbers or expressions");
    std::string s;
    for (char ch : v.get<std::string>())
        if (ch != ' ' && ch != '(' && ch != ')') s += ch;
    if (s == "inf" || s == "+inf") return inf;
    if (s == "-inf") return -inf;
    return parse(v.get<std::string>()).eval(0.0);
}

json read_job(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read job file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("job file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("job must be a JSON object");
    check_keys(j, {"command", "params", "profile", "grid", "options"}, "job");
    return j;
}

// Accepts {"kind": "builtin", "name": ..., "k": ...}, the shorthand {"builtin": ..., "k": ...},
// and {"kind": "closed_form", "f": ..., "h": ..., "domain": [lo, hi]}.
std::string builtin_name(const json& Pr) {
    if (!Pr.is_object()) return "";
    if (Pr.contains("builtin") && Pr["builtin"].is_string()) return Pr["builtin"];
    if (Pr.contains("name") && Pr["name"].is_string()) return Pr["name"];
    return "";
}

int default_family_for(const json& profile) {
    const std::string b = builtin_name(profile);
    if (b == "tautological") return 2;
    if (b == "fubini_study" || b == "fubini_study_k") return 4;
    return 1;
}

FamilyParams resolve_params(json& P, int default_family) {
    if (P.is_null()) P = json::object();
    check_keys(P, {"space", "k", "k1", "k2", "m", "p", "n", "family", "label"}, "params");
    const int n = get_or<int>(P, "n", 1, "params");
    const int family = get_or<int>(P, "family", default_family, "params");
    SpaceRecord space;
    if (P.contains("space")) {
        if (P.contains("m") || P.contains("p")) throw ValidationError("give either params.space or params.m/p");
        space = space_by_name(get_or<std::string>(P, "space", "", "params"), get_or<int>(P, "k", 0, "params"),
                              get_or<int>(P, "k1", 0, "params"), get_or<int>(P, "k2", 0, "params"));
    } else {
        space = custom_space(get_or<int>(P, "m", 2, "params"), get_or<int>(P, "p", 2, "params"));
    }
    FamilyParams params = make_params(space, n, family);
    P["m"] = params.m();
    P["p"] = params.p();
    P["n"] = params.n;
    P["family"] = params.family;
    P["label"] = params.space.label;
    return params;
}

Domain default_domain(int family) {
    switch (family) {
        case 2: return {0.0, inf};
        case 3: return {-std::numbers::pi, std::numbers::pi};
        case 4: return {0.0, std::numbers::pi};
        default: return {};
    }
}

MetricProfile resolve_profile(json& Pr, const FamilyParams& params) {
    if (Pr.is_null() || Pr.empty()) throw ValidationError("a profile is required (builtin or f and h)");
    check_keys(Pr, {"kind", "builtin", "name", "k", "f", "h", "domain"}, "profile");
    const std::string kind = get_or<std::string>(Pr, "kind", "", "profile");
    const std::string name = builtin_name(Pr);
    MetricProfile prof;
    json resolved;
    if (!name.empty() || kind == "builtin") {
        if (kind != "" && kind != "builtin") throw ValidationError("profile.kind conflicts with a builtin name");
        if (Pr.contains("f") || Pr.contains("h")) throw ValidationError("give either a builtin or f and h");
        if (name.empty()) throw ValidationError("builtin profile needs a name");
        const double k = get_or<double>(Pr, "k", 1.0, "profile");
        prof = builtin_profile(name, params, k);
        resolved = {{"kind", "builtin"}, {"name", name}, {"k", k}};
    } else {
        if (kind != "" && kind != "closed_form") throw ValidationError("profile.kind must be builtin or closed_form");
        if (!Pr.contains("f") || !Pr.contains("h")) throw ValidationError("profile needs both f and h");
        Domain d = default_domain(params.family);
        if (Pr.contains("domain")) {
            const json& dj = Pr["domain"];
            if (!dj.is_array() || dj.size() != 2) throw ValidationError("profile.domain must be [lo, hi]");
            d = {bound_value(dj[0]), bound_value(dj[1])};
        }
        const std::string f = get_or<std::string>(Pr, "f", "", "profile");
        const std::string h = get_or<std::string>(Pr, "h", "", "profile");
        prof = closed_form_profile(f, h, d, params.family);
        resolved = {{"kind", "closed_form"}, {"f", f}, {"h", h}};
    }
    resolved["domain"] = json::array({num(prof.domain().lo), num(prof.domain().hi)});
    Pr = resolved;
    return prof;
}

Grid resolve_grid(json& G, const MetricProfile& prof) {
    Grid g = default_grid(prof);
    if (!G.is_null()) {
        check_keys(G, {"r0", "r1", "count"}, "grid");
        g.r0 = get_or<double>(G, "r0", g.r0, "grid");
        g.r1 = get_or<double>(G, "r1", g.r1, "grid");
        g.count = get_or<int>(G, "count", g.count, "grid");
    }
    if (g.count < 2) throw ValidationError("grid.count must be at least 2");
    if (!(g.r1 > g.r0)) throw ValidationError("grid needs r0 < r1");
    const Domain& d = prof.domain();
    const double slack = 1e-12 * std::max({1.0, std::fabs(g.r0), std::fabs(g.r1)});
    if (!d.contains(g.r0, slack) || !d.contains(g.r1, slack)) throw ValidationError("grid leaves the profile domain");
    G = json{{"r0", g.r0}, {"r1", g.r1}, {"count", g.count}};
    return g;
}

// ---- output ---------------------------------------------------------------

std::string csv_rows(const std::vector<CurvaturePoint>& pts) {
    std::string s;
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
    s += "\n";
    for (const auto& c : pts) {
        const double v[] = {c.r,       c.f,       c.h,       c.kahler_residual, c.ric_NN,   c.ric_TT,
                            c.ric_XX,  c.scal,    c.ric1_TT, c.ric1_XX,         c.ric2_TT,  c.ric2_XX,
                            c.scal_ch, c.theta_N, c.torsion_coeff, c.pluriclosed_coeff, c.gauduchon_Q};
        for (std::size_t i = 0; i < std::size(v); ++i) s += (i ? "," : "") + fmt(v[i]);
        s += "\n";
    }
    return s;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw IoError("cannot write " + path);
    o << content;
    if (!o) throw IoError("write failed for " + path);
}

json flag_json(const Flag& f) {
    return {{"value", f.value}, {"residual", num(f.residual)}, {"threshold", num(f.threshold)},
            {"applicable", f.applicable}};
}

json boundary_json(const BoundaryReport& b) {
    json checks = json::array();
    for (const auto& c : b.checks)
        checks.push_back({{"name", c.name}, {"measured", num(c.measured)}, {"target", num(c.target)},
                          {"defect", num(c.defect)}, {"pass", c.pass}});
    return {{"family", b.family}, {"pass", b.pass}, {"max_defect", num(b.max_defect)}, {"checks", checks}};
}

// ---- commands -------------------------------------------------------------

struct Context {
    json job;
    std::string out;
    int threads = 1;
    std::ostream* os;
};

json& options(Context& cx) {
    if (!cx.job.contains("options") || cx.job["options"].is_null()) cx.job["options"] = json::object();
    return cx.job["options"];
}

int cmd_catalog(Context& cx) {
    json& O = options(cx);
    const int max_param = get_or<int>(O, "max_param", 6, "options");
    O["max_param"] = max_param;
    json table = json::array(), spaces = json::array();
    for (const auto& r : space_table())
        table.push_back({{"label", r.name}, {"m", r.m_rule}, {"p", r.p_rule}, {"conditions", r.conditions}});
    for (const auto& s : list_spaces(max_param))
        spaces.push_back({{"label", s.label}, {"m", s.m}, {"p", s.p}, {"conditions", s.constraint_note}});
    std::string csv = "label,m,p\n";
    for (const auto& s : list_spaces(max_param)) csv += s.label + "," + std::to_string(s.m) + "," + std::to_string(s.p) + "\n";
    if (!cx.out.empty()) write_file(cx.out, csv);
    *cx.os << json{{"command", "catalog"}, {"job", cx.job}, {"table", table}, {"spaces", spaces}}.dump() << "\n";
    return 0;
}

struct Resolved {
    FamilyParams params;
    MetricProfile profile;
    Grid grid;
};

Resolved resolve_profile_job(Context& cx) {
    json& Pr = cx.job["profile"];
    const int fam = default_family_for(Pr);
    FamilyParams params = resolve_params(cx.job["params"], fam);
    MetricProfile prof = resolve_profile(Pr, params);
    Grid g = resolve_grid(cx.job["grid"], prof);
    return {params, prof, g};
}

int cmd_eval(Context& cx) {
    Resolved R = resolve_profile_job(cx);
    const auto pts = evaluate_grid(R.params, R.profile, R.grid, cx.threads);
    const std::string csv = csv_rows(pts);
    if (cx.out.empty()) {
        *cx.os << csv;
        return 0;
    }
    write_file(cx.out, csv);
    *cx.os << json{{"command", "eval"}, {"job", cx.job}, {"rows", pts.size()}, {"out", cx.out}}.dump() << "\n";
    return 0;
}

int cmd_classify(Context& cx) {
    Resolved R = resolve_profile_job(cx);
    json& O = options(cx);
    const double tol = get_or<double>(O, "tol", 1e-8, "options");
    O["tol"] = tol;
    std::optional<double> target;
    if (O.contains("csc")) target = get_or<double>(O, "csc", 0.0, "options");
    const ClassificationReport rep = classify(R.params, R.profile, R.grid, tol, target, cx.threads);
    if (!cx.out.empty()) write_file(cx.out, csv_rows(evaluate_grid(R.params, R.profile, R.grid, cx.threads)));
    json flags{{"kahler", flag_json(rep.kahler)},         {"balanced", flag_json(rep.balanced)},
               {"pluriclosed", flag_json(rep.pluriclosed)}, {"gauduchon", flag_json(rep.gauduchon)},
               {"vaisman", flag_json(rep.vaisman)},       {"lck", flag_json(rep.lck)},
               {"strictly_lck", flag_json(rep.strictly_lck)}};
    json r{{"command", "classify"},
           {"job", cx.job},
           {"kahler", rep.kahler.value},
           {"balanced", rep.balanced.value},
           {"pluriclosed", rep.pluriclosed.value},
           {"gauduchon", rep.gauduchon.value},
           {"vaisman", rep.vaisman.value},
           {"lck", rep.lck.value},
           {"strictly_lck", rep.strictly_lck.value},
           {"flags", flags},
           {"gauduchon_constant", num(rep.gauduchon_constant)},
           {"sce_residual", num(rep.sce_residual)},
           {"mean_K", num(rep.mean_K)},
           {"csc_constant_estimate", num(rep.csc_constant_estimate)}};
    if (rep.csc_target) {
        r["csc_target"] = *rep.csc_target;
        r["csc_residual"] = num(rep.csc_residual);
    }
    *cx.os << r.dump() << "\n";
    return 0;
}

double phi_defect(const ProfileSolution& s, const Grid& g) {
    double d = 0.0;
    for (double r : g.points()) {
        const Taylor ph = s.phi(r, 1);
        d = std::max(d, std::fabs(ph[1] * ph[1] - s.u(ph[0])));
    }
    return d;
}

int cmd_solve(Context& cx, const std::string& which) {
    json& O = options(cx);
    const int fam = which == "csc-m4" ? 4 : 2;
    FamilyParams params = resolve_params(cx.job["params"], fam);
    json r{{"command", "solve " + which}, {"job", cx.job}};
    ProfileSolution sol;
    if (which == "sce-m2" || which == "csc-m2") {
        SolveOptions so;
        so.r_length = get_or<double>(O, "r_length", 10.0, "options");
        so.t_cap = get_or<double>(O, "t_cap", 101.0, "options");
        O["r_length"] = so.r_length;
        O["t_cap"] = so.t_cap;
        if (which == "sce-m2") {
            sol = solve_sce_m2(params, so);
        } else {
            if (!O.contains("c")) throw ValidationError("solve csc-m2 needs --c");
            const double c = get_or<double>(O, "c", 0.0, "options");
            const CscM2Coefficients co = csc_coefficients_m2(params, c);
            sol = solve_csc_m2(params, c, so);
            r["coefficients"] = {{"a", co.a}, {"b", co.b}, {"c", c}, {"a_printed", co.a_printed},
                                 {"b_printed", co.b_printed}, {"residual", co.residual}};
        }
    } else if (which == "csc-m4") {
        CscM4Options mo;
        mo.k_max = get_or<double>(O, "k_max", 50.0, "options");
        O["k_max"] = mo.k_max;
        sol = solve_csc_m4(params, mo);
        const UFamily& u = *sol.ufamily;
        const double m = params.m(), n = params.n, p = params.p(), k = sol.k_tilde;
        r["k_tilde"] = k;
        r["coefficients"] = {{"a", u.a}, {"b", u.b}, {"c", u.c}, {"branch", to_string(u.branch)}};
        r["u_conditions"] = {{"u(1)", u.u(1.0)},
                             {"u(k)", u.u(k)},
                             {"u'(1)-4mn/p", u.du(1.0) - 4 * m * n / p},
                             {"u'(k)+4mn/(kp)", u.du(k) + 4 * m * n / (k * p)}};
    } else {
        if (!O.contains("a")) throw ValidationError("solve sce-local needs --a");
        if (!O.contains("lambda")) throw ValidationError("solve sce-local needs --lambda");
        SceLocalOptions lo;
        const double a = get_or<double>(O, "a", 1.0, "options");
        const std::string lam = get_or<std::string>(O, "lambda", "", "options");
        lo.series_order = get_or<int>(O, "order", 8, "options");
        lo.horizon = get_or<double>(O, "horizon", 1.0, "options");
        O["order"] = lo.series_order;
        O["horizon"] = lo.horizon;
        sol = solve_sce_local(params, a, as_scalar_fn(parse(lam)), lo, lam);
        r["a"] = a;
        r["truncated"] = sol.truncated;
        if (!sol.note.empty()) r["note"] = sol.note;
    }
    Grid g = resolve_grid(cx.job["grid"], sol.profile);
    r["job"] = cx.job;
    r["problem"] = sol.problem;
    r["length"] = sol.length;
    r["domain"] = json::array({sol.profile.domain().lo, sol.profile.domain().hi});
    if (which == "csc-m2" || which == "csc-m4") r["c"] = sol.c;
    if (!sol.lambda_desc.empty()) r["lambda"] = sol.lambda_desc;
    const auto pts = evaluate_grid(params, sol.profile, g, cx.threads);
    json res;
    res["sce_residual"] = num(sce_residual(params, pts));
    if (which == "csc-m2" || which == "csc-m4") res["csc_residual"] = num(csc_residual(pts, sol.c));
    double kmin = inf;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) kmin = std::min(kmin, pts[i].kahler_residual);
    res["min_interior_K"] = num(kmin);
    if (sol.phi) res["phi_defect"] = num(phi_defect(sol, g));
    r["residuals"] = res;
    if (which != "sce-local") r["boundary"] = boundary_json(check_boundary(sol.profile, params, 1e-6));
    if (!cx.out.empty()) write_file(cx.out, csv_rows(pts));
    *cx.os << r.dump() << "\n";
    return 0;
}

std::vector<double> grid_spec(const json& O, const char* key, std::array<double, 3> def) {
    if (O.contains(key)) {
        const json& v = O.at(key);
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
            throw ValidationError(std::string("options.") + key + " must be [lo, hi, count]");
        def = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }
    if (def[2] < 1 || def[2] != std::floor(def[2])) throw ValidationError(std::string(key) + " count must be >= 1");
    return linspace(def[0], def[1], static_cast<int>(def[2]));
}

int cmd_probe(Context& cx) {
    json& O = options(cx);
    const std::string mode = get_or<std::string>(O, "mode", "family4", "options");
    if (mode != "family4" && mode != "cp_m") throw ValidationError("probe mode must be family4 or cp_m");
    const ProbeMode pm = mode == "family4" ? ProbeMode::family4 : ProbeMode::cp_m;
    FamilyParams params = resolve_params(cx.job["params"], pm == ProbeMode::family4 ? 4 : 2);
    const auto ag = grid_spec(O, "a_grid", {0.25, 4.0, 20});
    const auto eg = grid_spec(O, "E_grid", {-10.0, 30.0, 20});
    O["mode"] = mode;
    O["a_grid"] = {ag.front(), ag.back(), ag.size()};
    O["E_grid"] = {eg.front(), eg.back(), eg.size()};
    const ProbeReport rep = probe_ke_m4(params, ag, eg, pm, cx.threads);
    std::map<std::string, int> counts;
    std::string csv = "a,E,status,defect,r_star\n";
    for (const auto& c : rep.cells) {
        ++counts[c.status];
        csv += fmt(c.a) + "," + fmt(c.E) + "," + c.status + "," + fmt(c.defect) + "," + fmt(c.r_star) + "\n";
    }
    if (!cx.out.empty()) write_file(cx.out, csv);
    json r{{"command", "probe ke-m4"}, {"job", cx.job}, {"mode", mode}, {"min_defect", num(rep.min_defect)},
           {"closed_cells", rep.closed_cells}, {"status_counts", counts}};
    if (rep.closed_cells > 0) r["argmin"] = {{"a", rep.argmin_a}, {"E", rep.argmin_E}};
    *cx.os << r.dump() << "\n";
    return 0;
}

// ---- argument parsing -----------------------------------------------------

void add_io(CLI::App* s, Flags& F) {
    s->add_option("--job", F.job, "job JSON file");
    s->add_option("--out", F.out, "CSV output path");
    s->add_option("--threads", F.threads, "worker threads")->check(CLI::PositiveNumber);
}

void add_params(CLI::App* s, Flags& F) {
    s->add_option("--m", F.m, "complex dimension m");
    s->add_option("--p", F.p, "Fano index p");
    s->add_option("--n", F.n, "twist n");
    s->add_option("--family", F.family, "family 1..4");
    s->add_option("--space", F.space, "catalog space name");
    s->add_option("--space-k", F.space_k, "catalog parameter k");
    s->add_option("--k1", F.k1, "Grassmannian k1");
    s->add_option("--k2", F.k2, "Grassmannian k2");
}

std::string solve_help(const std::string& name) {
    if (name == "sce-m2") return "second-Chern-Einstein metric on family 2";
    if (name == "csc-m2") return "constant Chern scalar c <= 0 on family 2";
    if (name == "csc-m4") return "constant Chern scalar on family 4 (closing value k)";
    return "local second-Chern-Einstein solution from a singular orbit";
}

void add_profile(CLI::App* s, Flags& F) {
    // -h would shadow --h
    s->set_help_flag("--help", "print this help");
    s->add_option("--builtin", F.builtin, "homogeneous | tautological | fubini_study");
    s->add_option("--k", F.k, "builtin parameter k");
    s->add_option("--f", F.f, "expression for f(r)");
    s->add_option("--h", F.h, "expression for h(r)");
    s->add_option("--domain", F.domain, "lo hi")->expected(2);
}

void add_grid(CLI::App* s, Flags& F) { s->add_option("--grid", F.grid, "r0 r1 count")->expected(3); }

void merge_flags(CLI::App* s, const Flags& F, json& job) {
    auto has = [s](const char* name) {
        try {
            return s->count(name) > 0;
        } catch (const CLI::OptionNotFound&) {
            return false;
        }
    };
    json& P = job["params"];
    if (P.is_null()) P = json::object();
    if (has("--m")) P["m"] = F.m;
    if (has("--p")) P["p"] = F.p;
    if (has("--n")) P["n"] = F.n;
    if (has("--family")) P["family"] = F.family;
    if (has("--space")) P["space"] = F.space;
    if (has("--space-k")) P["k"] = F.space_k;
    if (has("--k1")) P["k1"] = F.k1;
    if (has("--k2")) P["k2"] = F.k2;
    if (has("--builtin") || has("--f") || has("--h") || has("--domain") || has("--k")) {
        json& Pr = job["profile"];
        if (Pr.is_null()) Pr = json::object();
        if (has("--builtin")) Pr["builtin"] = F.builtin;
        if (has("--k")) Pr["k"] = F.k;
        if (has("--f")) Pr["f"] = F.f;
        if (has("--h")) Pr["h"] = F.h;
        if (has("--domain")) Pr["domain"] = F.domain;
    }
    if (has("--grid")) {
        if (F.grid[2] != std::floor(F.grid[2])) throw ValidationError("--grid count must be an integer");
        job["grid"] = {{"r0", F.grid[0]}, {"r1", F.grid[1]}, {"count", static_cast<int>(F.grid[2])}};
    }
    json& O = job["options"];
    if (O.is_null()) O = json::object();
    if (has("--c")) O["c"] = F.c;
    if (has("--a")) O["a"] = F.a;
    if (has("--lambda")) O["lambda"] = F.lambda;
    if (has("--order")) O["order"] = F.order;
    if (has("--horizon")) O["horizon"] = F.horizon;
    if (has("--tol")) O["tol"] = F.tol;
    if (has("--csc")) O["csc"] = F.csc;
    if (has("--r-length")) O["r_length"] = F.r_length;
    if (has("--t-cap")) O["t_cap"] = F.t_cap;
    if (has("--k-max")) O["k_max"] = F.k_max;
    if (has("--max-param")) O["max_param"] = F.max_param;
    if (has("--mode")) O["mode"] = F.mode;
    if (has("--a-grid")) O["a_grid"] = F.a_grid;
    if (has("--E-grid")) O["E_grid"] = F.E_grid;
    // ordered_json stores members in a vector, so earlier references may be stale here
    if (job["params"].empty()) job.erase("params");
    if (job["options"].empty()) job.erase("options");
}

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::validation: return "validation";
        case ErrorKind::solver: return "solver";
        case ErrorKind::io: return "io";
        case ErrorKind::evaluation: return "evaluation";
    }
    return "error";
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::solver: return 3;
        case ErrorKind::io: return 4;
        default: return 2;
    }
}

int report_error(std::ostream& err, const std::string& kind, const std::string& msg, int code) {
    err << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << "\n";
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cohomogeneity-one Hermitian geometry toolkit", "cohomlab"};
    app.require_subcommand(1);
    Flags F;

    CLI::App* catalog = app.add_subcommand("catalog", "list the base spaces");
    add_io(catalog, F);
    catalog->add_option("--max-param", F.max_param, "largest parameter listed");

    CLI::App* eval = app.add_subcommand("eval", "curvature quantities of a profile on a grid (CSV)");
    CLI::App* cls = app.add_subcommand("classify", "geometric flags of a profile (JSON)");
    for (CLI::App* s : {eval, cls}) {
        add_io(s, F);
        add_params(s, F);
        add_profile(s, F);
        add_grid(s, F);
    }
    cls->add_option("--tol", F.tol, "flag tolerance");
    cls->add_option("--csc", F.csc, "also measure sup |scal_ch - value|");

    CLI::App* solve = app.add_subcommand("solve", "construct solution families");
    solve->require_subcommand(1);
    std::map<std::string, CLI::App*> solvers;
    for (const char* name : {"sce-m2", "csc-m2", "csc-m4", "sce-local"}) {
        CLI::App* s = solve->add_subcommand(name, solve_help(name));
        add_io(s, F);
        add_params(s, F);
        add_grid(s, F);
        solvers[name] = s;
    }
    for (const char* name : {"sce-m2", "csc-m2"}) {
        solvers[name]->add_option("--r-length", F.r_length, "largest domain length");
        solvers[name]->add_option("--t-cap", F.t_cap, "largest value of phi");
    }
    solvers["csc-m2"]->add_option("--c", F.c, "Chern scalar target (c <= 0)");
    solvers["csc-m4"]->add_option("--k-max", F.k_max, "end of the closing-value scan");
    solvers["sce-local"]->add_option("--a", F.a, "h(0)");
    solvers["sce-local"]->add_option("--lambda", F.lambda, "lambda(r) as an expression or constant");
    solvers["sce-local"]->add_option("--order", F.order, "series order");
    solvers["sce-local"]->add_option("--horizon", F.horizon, "integration end");

    CLI::App* probe = app.add_subcommand("probe", "numerical probes");
    probe->require_subcommand(1);
    CLI::App* ke = probe->add_subcommand("ke-m4", "Kähler-Einstein shooting scan on family 4");
    add_io(ke, F);
    add_params(ke, F);
    ke->add_option("--mode", F.mode, "family4 | cp_m");
    ke->add_option("--a-grid", F.a_grid, "lo hi count")->expected(3);
    ke->add_option("--E-grid", F.E_grid, "lo hi count")->expected(3);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        return report_error(err, "validation", e.what(), 2);
    }

    try {
        CLI::App* leaf = nullptr;
        std::string command;
        if (catalog->parsed()) leaf = catalog, command = "catalog";
        if (eval->parsed()) leaf = eval, command = "eval";
        if (cls->parsed()) leaf = cls, command = "classify";
        for (auto& [name, s] : solvers)
            if (s->parsed()) leaf = s, command = "solve " + name;
        if (ke->parsed()) leaf = ke, command = "probe ke-m4";
        if (!leaf) throw ValidationError("no command given");

        Context cx;
        cx.os = &out;
        cx.job = F.job.empty() ? json::object() : read_job(F.job);
        if (cx.job.contains("command") && cx.job["command"] != command)
            throw ValidationError("job is for command '" + cx.job["command"].dump() + "', not '" + command + "'");
        merge_flags(leaf, F, cx.job);
        cx.job = json{{"command", command}, {"params", cx.job.value("params", json())},
                      {"profile", cx.job.value("profile", json())}, {"grid", cx.job.value("grid", json())},
                      {"options", cx.job.value("options", json())}};
        cx.out = F.out;
        cx.threads = F.threads;
        if (command == "catalog") return cmd_catalog(cx);
        if (command == "eval") return cmd_eval(cx);
        if (command == "classify") return cmd_classify(cx);
        if (command == "probe ke-m4") return cmd_probe(cx);
        return cmd_solve(cx, command.substr(6));
    } catch (const Error& e) {
        return report_error(err, kind_name(e.kind()), e.what(), exit_code(e.kind()));
    } catch (const std::exception& e) {
        return report_error(err, "validation", e.what(), 2);
    }
}

}  // namespace cohom::cli

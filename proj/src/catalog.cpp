#include "cohom/catalog.hpp"

#include <cmath>

#include "cohom/errors.hpp"

namespace cohom {

double FamilyParams::ca() const {
    const double m = space.m, nn = n, pp = space.p;
    return 2.0 * m * (m - 1.0) * nn * nn / (pp * pp);
}

const std::vector<TableRow>& space_table() {
    static const std::vector<TableRow> rows = {
        {SpaceKind::grassmannian, "SU(k1+k2)/S(U(k1)xU(k2))", "k1*k2+1", "k1+k2", "k2 >= k1 >= 1"},
        {SpaceKind::so_even, "SO(2k)/U(k)", "k(k-1)/2+1", "2(k-1)", "k >= 5"},
        {SpaceKind::sp, "Sp(k)/U(k)", "k(k+1)/2+1", "k+1", "k >= 2"},
        {SpaceKind::quadric, "SO(k+2)/(SO(2)xSO(k))", "k+1", "k", "k >= 5"},
        {SpaceKind::e6, "E6/(U(1)Spin(10))", "17", "12", "none"},
        {SpaceKind::e7, "E7/(U(1)E6)", "28", "18", "none"},
    };
    return rows;
}

SpaceRecord grassmannian(int k1, int k2) {
    if (!(k2 >= k1 && k1 >= 1)) throw ValidationError("Grassmannian needs k2 >= k1 >= 1");
    return {"SU(" + std::to_string(k1 + k2) + ")/S(U(" + std::to_string(k1) + ")xU(" + std::to_string(k2) + "))",
            k1 * k2 + 1, k1 + k2, "k2 >= k1 >= 1"};
}

SpaceRecord so_even(int k) {
    if (k < 5) throw ValidationError("SO(2k)/U(k) needs k >= 5");
    return {"SO(" + std::to_string(2 * k) + ")/U(" + std::to_string(k) + ")", k * (k - 1) / 2 + 1, 2 * (k - 1),
            "k >= 5"};
}

SpaceRecord sp(int k) {
    if (k < 2) throw ValidationError("Sp(k)/U(k) needs k >= 2");
    return {"Sp(" + std::to_string(k) + ")/U(" + std::to_string(k) + ")", k * (k + 1) / 2 + 1, k + 1, "k >= 2"};
}

SpaceRecord quadric(int k) {
    if (k < 5) throw ValidationError("SO(k+2)/(SO(2)xSO(k)) needs k >= 5");
    return {"SO(" + std::to_string(k + 2) + ")/(SO(2)xSO(" + std::to_string(k) + "))", k + 1, k, "k >= 5"};
}

SpaceRecord e6() { return {"E6/(U(1)Spin(10))", 17, 12, "none"}; }
SpaceRecord e7() { return {"E7/(U(1)E6)", 28, 18, "none"}; }

SpaceRecord projective(int m) {
    if (m < 2) throw ValidationError("CP^{m-1} needs m >= 2");
    SpaceRecord rec = grassmannian(1, m - 1);
    rec.label = "CP^" + std::to_string(m - 1);
    return rec;
}

SpaceRecord custom_space(int m, int p) {
    if (m < 2) throw ValidationError("m must be >= 2");
    if (p < 1) throw ValidationError("p must be >= 1");
    return {"custom", m, p, "m >= 2, p >= 1"};
}

std::vector<SpaceRecord> list_spaces(int max_param) {
    std::vector<SpaceRecord> out;
    for (int k1 = 1; k1 <= max_param; ++k1)
        for (int k2 = k1; k2 <= max_param; ++k2) out.push_back(grassmannian(k1, k2));
    for (int k = 5; k <= std::max(5, max_param); ++k) out.push_back(so_even(k));
    for (int k = 2; k <= max_param; ++k) out.push_back(sp(k));
    for (int k = 5; k <= std::max(5, max_param); ++k) out.push_back(quadric(k));
    out.push_back(e6());
    out.push_back(e7());
    return out;
}

SpaceRecord space_by_name(const std::string& name, int k, int k1, int k2) {
    if (name == "grassmannian") return grassmannian(k1, k2);
    if (name == "projective" || name == "cp") return projective(k);
    if (name == "so_even") return so_even(k);
    if (name == "sp") return sp(k);
    if (name == "quadric") return quadric(k);
    if (name == "e6") return e6();
    if (name == "e7") return e7();
    throw ValidationError("unknown space '" + name + "'");
}

FamilyParams make_params(const SpaceRecord& space, int n, int family) {
    if (space.m < 2 || space.p < 1) throw ValidationError("space record needs m >= 2 and p >= 1");
    if (n < 1) throw ValidationError("twist n must be >= 1");
    if (family < 1 || family > 4) throw ValidationError("family must be in 1..4");
    FamilyParams fp;
    fp.space = space;
    fp.n = n;
    fp.family = family;
    fp.lambda = std::sqrt(2.0 * space.m / (space.m - 1.0));
    return fp;
}

}  // namespace cohom

#pragma once
#include <string>
#include <vector>

namespace cohom {

struct SpaceRecord {
    std::string label;
    int m = 0;
    int p = 0;
    std::string constraint_note;
};

struct FamilyParams {
    SpaceRecord space;
    int n = 1;
    int family = 1;
    double lambda = 0.0;

    int m() const { return space.m; }
    int p() const { return space.p; }
    // mn/p
    double q() const { return static_cast<double>(space.m) * n / space.p; }
    // 2m(m-1)n^2/p^2, so that g(N,N) = g(T*,T*) = ca() f^2
    double ca() const;
};

enum class SpaceKind { grassmannian, so_even, sp, quadric, e6, e7 };

// One row per parameterized family with its symbolic rule.
struct TableRow {
    SpaceKind kind;
    std::string name;
    std::string m_rule;
    std::string p_rule;
    std::string conditions;
};

const std::vector<TableRow>& space_table();

// Concrete records. Grassmannian takes (k1, k2); the others take k; E6 and E7 take none.
SpaceRecord grassmannian(int k1, int k2);
SpaceRecord so_even(int k);  // SO(2k)/U(k)
SpaceRecord sp(int k);       // Sp(k)/U(k)
SpaceRecord quadric(int k);  // SO(k+2)/(SO(2) x SO(k))
SpaceRecord e6();
SpaceRecord e7();
SpaceRecord projective(int m);  // CP^{m-1}, the Grassmannian with k1 = 1
SpaceRecord custom_space(int m, int p);

// Sample listing: for each row, the members with small parameters.
std::vector<SpaceRecord> list_spaces(int max_param = 6);

SpaceRecord space_by_name(const std::string& name, int k = 0, int k1 = 0, int k2 = 0);

FamilyParams make_params(const SpaceRecord& space, int n, int family);

}  // namespace cohom

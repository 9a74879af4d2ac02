#pragma once
#include <map>
#include <string>

#include "cohom/catalog.hpp"
#include "cohom/profiles.hpp"

namespace cohom {

struct CurvaturePoint {
    double r = 0.0;
    double f = 0.0, h = 0.0;
    double kahler_residual = 0.0;
    double ric_NN = 0.0, ric_TT = 0.0, ric_XX = 0.0, scal = 0.0;
    double ric1_TT = 0.0, ric1_XX = 0.0;
    double ric2_TT = 0.0, ric2_XX = 0.0;
    double scal_ch = 0.0;
    double theta_N = 0.0, torsion_coeff = 0.0;
    double pluriclosed_coeff = 0.0;
    double gauduchon_Q = 0.0;

    double ric1_NN() const { return ric1_TT; }
    double ric2_NN() const { return ric2_TT; }
};

struct RiemannianRicci {
    double NN, TT, XX, scal;
};

struct ChernRicci {
    double ric1_TT, ric1_XX, ric2_TT, ric2_XX;
};

struct LeeForm {
    double theta_N, torsion_coeff;
};

struct LeeDerivative {
    double DN_N, DT_T, DY_X_coeff;
};

// Keys are "direction,argument->output" over {N, T*, X*, Y*, JX*, JY*}.
struct ConnectionTables {
    std::map<std::string, double> levi_civita;
    std::map<std::string, double> chern;
    // Coefficient of X* in T(N, X*) rebuilt as (Chern - Levi-Civita) differences.
    double torsion_NX = 0.0;
};

double kahler_residual(const FamilyParams& params, const ProfileJets& j);
RiemannianRicci riemannian_ricci(const FamilyParams& params, const ProfileJets& j);
ChernRicci chern_ricci(const FamilyParams& params, const ProfileJets& j);
double chern_scalar(const FamilyParams& params, const ProfileJets& j);
LeeForm lee_form(const FamilyParams& params, const ProfileJets& j);
// d/dr of theta_N from the jets.
double lee_form_derivative(const FamilyParams& params, const ProfileJets& j);
LeeDerivative lee_covariant_derivative(const FamilyParams& params, const ProfileJets& j, double theta_jet);
double pluriclosed_coeff(const FamilyParams& params, const ProfileJets& j);
double gauduchon_quantity(const FamilyParams& params, const ProfileJets& j);
// (1/(f h^{2(m-2)})) dQ/dr as the bracket K (f'/f + 2(m-2) h'/h) + K'.
double gauduchon_bracket(const FamilyParams& params, const ProfileJets& j);
ConnectionTables connection_tables(const FamilyParams& params, const ProfileJets& j);

CurvaturePoint curvature_point(const FamilyParams& params, const ProfileJets& j, double r);

// At a finite end where f or h vanishes the quantities are taken as the limit from the
// interior, (4 Q(d/2) - Q(d))/3 with d = 1e-3 * min(1, length); all quantities are even there.
CurvaturePoint evaluate_curvature(const FamilyParams& params, const MetricProfile& p, double r);

}  // namespace cohom

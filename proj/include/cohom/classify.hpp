#pragma once
#include <optional>
#include <vector>

#include "cohom/curvature.hpp"

namespace cohom {

struct Grid {
    double r0 = 0.0;
    double r1 = 1.0;
    int count = 401;
    std::vector<double> points() const;
};

// 401 uniform points; singular ends inset by 1e-3 * length, infinite ends cut at distance 10.
Grid default_grid(const MetricProfile& p);

std::vector<CurvaturePoint> evaluate_grid(const FamilyParams& params, const MetricProfile& p, const Grid& g,
                                          int threads = 1);

struct Flag {
    bool value = false;
    double residual = 0.0;
    double threshold = 0.0;
    bool applicable = true;
};

struct ClassificationReport {
    Flag kahler, balanced, pluriclosed, gauduchon, vaisman, lck, strictly_lck;
    double gauduchon_constant = 0.0;
    double sce_residual = 0.0;
    std::optional<double> csc_target;
    double csc_residual = 0.0;
    double csc_constant_estimate = 0.0;
    double mean_K = 0.0;
    Grid grid;
    double tol = 1e-8;
};

ClassificationReport classify(const FamilyParams& params, const MetricProfile& p, const Grid& g, double tol = 1e-8,
                              std::optional<double> csc_target = std::nullopt, int threads = 1);
ClassificationReport classify(const FamilyParams& params, const MetricProfile& p, double tol = 1e-8);

// sup |ric2_TT/(ca f^2) - ric2_XX/h^2|: the two sides of the second-Chern-Einstein system with lambda eliminated.
double sce_residual(const FamilyParams& params, const MetricProfile& p, const Grid& g);
// Points with f = 0 give inf; the profile overload takes the limit there.
double sce_residual(const FamilyParams& params, const std::vector<CurvaturePoint>& pts);
// sup |scal_ch - c|
double csc_residual(const FamilyParams& params, const MetricProfile& p, const Grid& g, double c);
double csc_residual(const std::vector<CurvaturePoint>& pts, double c);

}  // namespace cohom

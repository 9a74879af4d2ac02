#pragma once
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cohom/catalog.hpp"
#include "cohom/expr.hpp"
#include "cohom/taylor.hpp"

namespace cohom {

enum class ProfileKind { closed_form, builtin, ode_solution, sampled };

std::string to_string(ProfileKind k);

struct Domain {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool finite() const;
    bool contains(double r, double slack = 0.0) const;
    double length() const { return hi - lo; }
};

// Kind-specific payload: series of f and h in (r - r0) up to the requested order.
class ProfileSource {
public:
    virtual ~ProfileSource() = default;
    virtual void series(double r0, std::size_t order, Taylor& f, Taylor& h) const = 0;
};

struct ProfileJets {
    double f0 = 0, f1 = 0, f2 = 0, f3 = 0;
    double h0 = 0, h1 = 0, h2 = 0, h3 = 0;
};

class MetricProfile {
public:
    MetricProfile() = default;
    MetricProfile(ProfileKind kind, Domain domain, std::shared_ptr<const ProfileSource> source, std::string name,
                  std::optional<int> family_hint = std::nullopt);

    ProfileKind kind() const { return kind_; }
    const Domain& domain() const { return domain_; }
    const std::string& name() const { return name_; }
    std::optional<int> family_hint() const { return family_hint_; }
    const std::shared_ptr<const ProfileSource>& source() const { return source_; }

    // No domain or positivity checks.
    void series(double r, std::size_t order, Taylor& f, Taylor& h) const;
    double f(double r) const;
    double h(double r) const;

    // True when f or h vanishes at that finite end (a singular orbit or a collapsing point).
    bool singular_end(bool upper) const;

private:
    ProfileKind kind_ = ProfileKind::closed_form;
    Domain domain_;
    std::shared_ptr<const ProfileSource> source_;
    std::string name_;
    std::optional<int> family_hint_;
};

// Interior points need f, h > 0; at a finite end f may vanish (singular orbit).
ProfileJets profile_jets(const MetricProfile& p, double r);

MetricProfile closed_form_profile(const Expression& f, const Expression& h, Domain domain,
                                  std::optional<int> family_hint = std::nullopt);
MetricProfile closed_form_profile(const std::string& f, const std::string& h, Domain domain,
                                  std::optional<int> family_hint = std::nullopt);

// Positivity of f and h on a 1024-point probe grid; infinite ends are cut at distance 50.
void check_positive(const MetricProfile& p);

MetricProfile builtin_homogeneous(const FamilyParams& params);
MetricProfile builtin_tautological(double k);
MetricProfile builtin_fubini_study();
MetricProfile builtin_fubini_study_k(double k);
MetricProfile builtin_profile(const std::string& name, const FamilyParams& params, double k);

// C4 quintic spline through samples (end derivatives from the degree-5 interpolant of the end knots).
MetricProfile sampled_profile(std::vector<double> r, std::vector<double> f, std::vector<double> h,
                              std::optional<int> family_hint = std::nullopt);
MetricProfile sample_profile(const MetricProfile& src, std::size_t knots = 512);

struct BoundaryCheck {
    std::string name;
    double measured = 0.0;
    double target = 0.0;
    double defect = 0.0;
    bool pass = false;
};

struct BoundaryReport {
    int family = 1;
    std::vector<BoundaryCheck> checks;
    bool pass = true;
    double max_defect = 0.0;
};

BoundaryReport check_boundary(const MetricProfile& p, const FamilyParams& params, double tol = 1e-8);

// g(f,h) -> phi^2 g(f,h), reparametrized by xi(r) = int_0^r phi (or from the lower end if 0 is outside).
MetricProfile conformal_reparametrize(const MetricProfile& p, const Expression& phi, const FamilyParams& params);
MetricProfile conformal_reparametrize(const MetricProfile& p, const ScalarFn& phi, const FamilyParams& params,
                                      const std::string& phi_text = "fn");

// For a conformal_reparametrize result: rho -> 1/phi(xi^{-1}(rho)), which undoes the change.
ScalarFn conformal_inverse_factor(const MetricProfile& conformal_result);

}  // namespace cohom

#pragma once
#include <cstddef>
#include <vector>

namespace cohom {

// Truncated Taylor series: c[k] = (k-th derivative)/k! at the expansion point.
class Taylor {
public:
    Taylor() : c_(1, 0.0) {}
    Taylor(std::size_t order, double value);
    explicit Taylor(std::vector<double> coeffs);

    // The identity x0 + eps.
    static Taylor variable(double x0, std::size_t order);

    std::size_t order() const { return c_.size() - 1; }
    double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    double& operator[](std::size_t k) { return c_[k]; }
    const std::vector<double>& coeffs() const { return c_; }
    double value() const { return c_[0]; }
    double derivative(std::size_t k) const;
    Taylor truncated(std::size_t order) const;

    // Sum of c[k] eps^k.
    double evaluate(double eps) const;

    Taylor& operator+=(const Taylor& b);
    Taylor& operator-=(const Taylor& b);
    Taylor& operator*=(const Taylor& b);
    Taylor& operator/=(const Taylor& b);
    Taylor& operator+=(double b);
    Taylor& operator-=(double b);
    Taylor& operator*=(double b);
    Taylor& operator/=(double b);

private:
    std::vector<double> c_;
};

Taylor operator+(Taylor a, const Taylor& b);
Taylor operator-(Taylor a, const Taylor& b);
Taylor operator*(const Taylor& a, const Taylor& b);
Taylor operator/(const Taylor& a, const Taylor& b);
Taylor operator+(Taylor a, double b);
Taylor operator+(double a, Taylor b);
Taylor operator-(Taylor a, double b);
Taylor operator-(double a, const Taylor& b);
Taylor operator*(Taylor a, double b);
Taylor operator*(double a, Taylor b);
Taylor operator/(Taylor a, double b);
Taylor operator/(double a, const Taylor& b);
Taylor operator-(const Taylor& a);

Taylor exp(const Taylor& a);
Taylor log(const Taylor& a);
Taylor sqrt(const Taylor& a);
Taylor sin(const Taylor& a);
Taylor cos(const Taylor& a);
Taylor tan(const Taylor& a);
Taylor abs(const Taylor& a);
Taylor pow(const Taylor& a, double alpha);
Taylor pow(const Taylor& a, int k);
Taylor pow(const Taylor& a, const Taylor& b);

// d/d eps and the antiderivative vanishing at eps = 0, order preserved by truncation/extension.
Taylor differentiate(const Taylor& a);
Taylor integrate(const Taylor& a, double constant = 0.0);

// Coefficients of f(g(eps)) where f is a series in (x - g[0]).
Taylor compose(const Taylor& f, const Taylor& g);

// Series inverse: g(revert(g)(eps) ) = g[0] + eps. Needs g[1] != 0.
Taylor revert(const Taylor& g);

struct Jet3 {
    double v0 = 0, v1 = 0, v2 = 0, v3 = 0;
};

Jet3 to_jet3(const Taylor& t);

Jet3 operator+(const Jet3& a, const Jet3& b);
Jet3 operator*(const Jet3& a, const Jet3& b);
Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);

}  // namespace cohom

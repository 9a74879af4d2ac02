#include "cohom/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cohom/errors.hpp"

namespace cohom {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::size_t common_order(const Taylor& a, const Taylor& b) { return std::min(a.order(), b.order()); }

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x && std::fabs(x) < 1e9; }

}  // namespace

Taylor::Taylor(std::size_t order, double value) : c_(order + 1, 0.0) { c_[0] = value; }

Taylor::Taylor(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);
}

Taylor Taylor::variable(double x0, std::size_t order) {
    Taylor t(order, x0);
    if (order >= 1) t.c_[1] = 1.0;
    return t;
}

double Taylor::derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return (*this)[k] * f;
}

Taylor Taylor::truncated(std::size_t order) const {
    std::vector<double> c(order + 1, 0.0);
    for (std::size_t k = 0; k <= order && k < c_.size(); ++k) c[k] = c_[k];
    return Taylor(std::move(c));
}

double Taylor::evaluate(double eps) const {
    double s = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) s = s * eps + c_[k];
    return s;
}

Taylor& Taylor::operator+=(const Taylor& b) {
    c_.resize(common_order(*this, b) + 1);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += b.c_[k];
    return *this;
}

Taylor& Taylor::operator-=(const Taylor& b) {
    c_.resize(common_order(*this, b) + 1);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= b.c_[k];
    return *this;
}

Taylor& Taylor::operator*=(const Taylor& b) {
    *this = *this * b;
    return *this;
}

Taylor& Taylor::operator/=(const Taylor& b) {
    *this = *this / b;
    return *this;
}

Taylor& Taylor::operator+=(double b) {
    c_[0] += b;
    return *this;
}

Taylor& Taylor::operator-=(double b) {
    c_[0] -= b;
    return *this;
}

Taylor& Taylor::operator*=(double b) {
    for (auto& x : c_) x *= b;
    return *this;
}

Taylor& Taylor::operator/=(double b) {
    if (b == 0.0) throw EvalError("division by zero", kNan);
    for (auto& x : c_) x /= b;
    return *this;
}

Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }

Taylor operator*(const Taylor& a, const Taylor& b) {
    const std::size_t n = common_order(a, b);
    std::vector<double> c(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j <= k; ++j) s += a[j] * b[k - j];
        c[k] = s;
    }
    return Taylor(std::move(c));
}

Taylor operator/(const Taylor& a, const Taylor& b) {
    if (b[0] == 0.0) throw EvalError("division by zero", kNan);
    const std::size_t n = common_order(a, b);
    std::vector<double> q(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        double s = a[k];
        for (std::size_t j = 1; j <= k; ++j) s -= b[j] * q[k - j];
        q[k] = s / b[0];
    }
    return Taylor(std::move(q));
}

Taylor operator+(Taylor a, double b) { return a += b; }
Taylor operator+(double a, Taylor b) { return b += a; }
Taylor operator-(Taylor a, double b) { return a -= b; }
Taylor operator-(double a, const Taylor& b) { return (-b) += a; }
Taylor operator*(Taylor a, double b) { return a *= b; }
Taylor operator*(double a, Taylor b) { return b *= a; }
Taylor operator/(Taylor a, double b) { return a /= b; }
Taylor operator/(double a, const Taylor& b) { return Taylor(b.order(), a) / b; }
Taylor operator-(const Taylor& a) { return a * -1.0; }

Taylor exp(const Taylor& a) {
    const std::size_t n = a.order();
    std::vector<double> e(n + 1, 0.0);
    e[0] = std::exp(a[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * e[k - j];
        e[k] = s / static_cast<double>(k);
    }
    return Taylor(std::move(e));
}

Taylor log(const Taylor& a) {
    if (!(a[0] > 0.0)) throw EvalError("log of nonpositive argument", kNan);
    const std::size_t n = a.order();
    std::vector<double> l(n + 1, 0.0);
    l[0] = std::log(a[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        double s = static_cast<double>(k) * a[k];
        for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) * l[j] * a[k - j];
        l[k] = s / (static_cast<double>(k) * a[0]);
    }
    return Taylor(std::move(l));
}

Taylor sqrt(const Taylor& a) {
    if (a[0] < 0.0) throw EvalError("sqrt of negative argument", kNan);
    const std::size_t n = a.order();
    if (a[0] == 0.0) {
        if (n == 0) return Taylor(0, 0.0);
        throw EvalError("sqrt is not differentiable at zero", kNan);
    }
    std::vector<double> s(n + 1, 0.0);
    s[0] = std::sqrt(a[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = a[k];
        for (std::size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
        s[k] = acc / (2.0 * s[0]);
    }
    return Taylor(std::move(s));
}

namespace {

void sincos(const Taylor& a, Taylor& s, Taylor& c) {
    const std::size_t n = a.order();
    std::vector<double> sv(n + 1, 0.0), cv(n + 1, 0.0);
    sv[0] = std::sin(a[0]);
    cv[0] = std::cos(a[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        double ss = 0.0, cc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            const double ja = static_cast<double>(j) * a[j];
            ss += ja * cv[k - j];
            cc -= ja * sv[k - j];
        }
        sv[k] = ss / static_cast<double>(k);
        cv[k] = cc / static_cast<double>(k);
    }
    s = Taylor(std::move(sv));
    c = Taylor(std::move(cv));
}

}  // namespace

Taylor sin(const Taylor& a) {
    Taylor s, c;
    sincos(a, s, c);
    return s;
}

Taylor cos(const Taylor& a) {
    Taylor s, c;
    sincos(a, s, c);
    return c;
}

Taylor tan(const Taylor& a) {
    Taylor s, c;
    sincos(a, s, c);
    return s / c;
}

Taylor abs(const Taylor& a) {
    for (std::size_t k = 0; k <= a.order(); ++k) {
        if (a[k] > 0.0) return a;
        if (a[k] < 0.0) return -a;
    }
    return a;
}

Taylor pow(const Taylor& a, int k) {
    if (k < 0) return 1.0 / pow(a, -k);
    Taylor result(a.order(), 1.0);
    Taylor base = a;
    unsigned e = static_cast<unsigned>(k);
    while (e) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e) base = base * base;
    }
    return result;
}

Taylor pow(const Taylor& a, double alpha) {
    if (is_integer(alpha)) return pow(a, static_cast<int>(alpha));
    if (a[0] < 0.0) throw EvalError("non-integer power of negative argument", kNan);
    if (a[0] == 0.0) {
        if (a.order() == 0 && alpha > 0.0) return Taylor(0, 0.0);
        throw EvalError("non-integer power at zero", kNan);
    }
    const std::size_t n = a.order();
    std::vector<double> p(n + 1, 0.0);
    p[0] = std::pow(a[0], alpha);
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            s += (alpha * static_cast<double>(j) - static_cast<double>(k - j)) * a[j] * p[k - j];
        p[k] = s / (static_cast<double>(k) * a[0]);
    }
    return Taylor(std::move(p));
}

Taylor pow(const Taylor& a, const Taylor& b) {
    bool constant_exponent = true;
    for (std::size_t k = 1; k <= b.order(); ++k)
        if (b[k] != 0.0) constant_exponent = false;
    if (constant_exponent) return pow(a.truncated(std::min(a.order(), b.order())), b[0]);
    return exp(b * log(a));
}

Taylor differentiate(const Taylor& a) {
    const std::size_t n = a.order();
    std::vector<double> d(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) d[k] = static_cast<double>(k + 1) * a[k + 1];
    if (n >= 1) d.resize(n);
    return Taylor(std::move(d));
}

Taylor integrate(const Taylor& a, double constant) {
    const std::size_t n = a.order();
    std::vector<double> s(n + 2, 0.0);
    s[0] = constant;
    for (std::size_t k = 0; k <= n; ++k) s[k + 1] = a[k] / static_cast<double>(k + 1);
    return Taylor(std::move(s));
}

Taylor compose(const Taylor& f, const Taylor& g) {
    const std::size_t n = std::min(f.order(), g.order());
    Taylor d = g.truncated(n);
    d[0] = 0.0;
    Taylor result(n, f[f.order()]);
    for (std::size_t k = f.order(); k-- > 0;) {
        result = result * d;
        result[0] += f[k];
    }
    return result.truncated(n);
}

Taylor revert(const Taylor& g) {
    const std::size_t n = g.order();
    if (n == 0) return Taylor(0, 0.0);
    if (g[1] == 0.0) throw EvalError("series reversion needs a nonzero linear term", kNan);
    Taylor h(n, 0.0);
    h[1] = 1.0 / g[1];
    for (std::size_t k = 2; k <= n; ++k) {
        Taylor trial = compose(g, h);
        h[k] = -trial[k] / g[1];
    }
    return h;
}

Jet3 to_jet3(const Taylor& t) { return {t.derivative(0), t.derivative(1), t.derivative(2), t.derivative(3)}; }

namespace {

Taylor from_jet(const Jet3& j) { return Taylor(std::vector<double>{j.v0, j.v1, j.v2 / 2.0, j.v3 / 6.0}); }

}  // namespace

Jet3 operator+(const Jet3& a, const Jet3& b) { return {a.v0 + b.v0, a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3}; }
Jet3 operator*(const Jet3& a, const Jet3& b) { return to_jet3(from_jet(a) * from_jet(b)); }
Jet3 sin(const Jet3& a) { return to_jet3(sin(from_jet(a))); }
Jet3 cos(const Jet3& a) { return to_jet3(cos(from_jet(a))); }

}  // namespace cohom

#pragma once
#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace cohom {

struct Tolerance {
    double abs = 1e-10;
    double rel = 1e-10;
    long max_steps = 200000;
};

using State = std::vector<double>;
using Rhs = std::function<void(double r, const State& y, State& dydr)>;
using EventFn = std::function<double(double r, const State& y)>;

struct RkOptions {
    Tolerance tol;
    double initial_step = 0.0;  // 0 selects automatically
    double max_step = 0.0;      // 0 means unbounded
    EventFn event;              // integration stops where the sign of event changes
    bool check_dense = true;    // include the midpoint dense-output error in step acceptance
};

class Trajectory {
public:
    std::size_t dimension() const { return dim_; }
    double r_begin() const { return r_.front(); }
    double r_end() const { return r_end_; }
    State final_state() const { return at(r_end_); }
    bool event_hit() const { return event_hit_; }
    std::size_t steps() const { return r_.size() - 1; }
    const std::vector<double>& nodes() const { return r_; }
    // Accepted step nodes; after an event the last node lies past r_end().
    const std::vector<State>& states() const { return y_; }

    // Dense output on [r_begin, r_end].
    State at(double r) const;

private:
    friend Trajectory rk_integrate(const Rhs&, const State&, double, double, const RkOptions&);
    std::size_t dim_ = 0;
    std::vector<double> r_;
    std::vector<State> y_;
    std::vector<std::array<State, 7>> k_;
    double r_end_ = 0.0;
    bool event_hit_ = false;
};

// Dormand-Prince 5(4), PI step control, quartic dense output. Throws BlowUpError.
Trajectory rk_integrate(const Rhs& rhs, const State& y0, double r0, double r1, const RkOptions& opt = {});

// Adaptive Gauss-Legendre (32 nodes per panel) to relative tolerance.
double integrate(const std::function<double(double)>& g, double a, double b, double rel_tol = 1e-12);

struct GaussRule {
    std::vector<double> x, w;  // on [-1, 1]
};
const GaussRule& gauss_legendre_32();

// Integral of 1/sqrt(u) over [t0, t1]; flagged ends are simple zeros of u and are
// removed by t = end -+ s^2.
double integrate_sqrt_endpoint(const std::function<double(double)>& u, double t0, double t1, bool left_zero,
                               bool right_zero, double rel_tol = 1e-12);

// Brent's method on a sign-changing bracket.
double find_root_bracketed(const std::function<double(double)>& g, double lo, double hi, double tol = 1e-14,
                           int max_iter = 200);

template <std::size_t N>
struct LinearSolution {
    std::array<double, N> x{};
    double residual = 0.0;  // max-norm of A x - b
};

// Gaussian elimination with partial pivoting; pivot below 1e-14 * scale is singular.
template <std::size_t N>
LinearSolution<N> solve_linear(const std::array<std::array<double, N>, N>& A, const std::array<double, N>& b);

LinearSolution<3> solve_linear_3(const std::array<std::array<double, 3>, 3>& A, const std::array<double, 3>& b);
LinearSolution<2> solve_linear_2(const std::array<std::array<double, 2>, 2>& A, const std::array<double, 2>& b);

// Richardson-extrapolated central differences.
double derivative_fd(const std::function<double(double)>& g, double x, double h = 1e-4);
double derivative_fd_n(const std::function<double(double)>& g, double x, int order, double h);

// Solve G(x) = y for increasing G on [lo, hi] with derivative dG > 0: safeguarded Newton.
double invert_monotone(const std::function<double(double)>& G, const std::function<double(double)>& dG, double y,
                       double lo, double hi, double tol = 1e-12);

}  // namespace cohom

#pragma once
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "cohom/taylor.hpp"

namespace cohom {

struct ExprNode;

class Expression {
public:
    Expression() = default;
    explicit Expression(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

    static Expression constant(double v);

    // Evaluates on a series argument; errors carry the point x[0].
    Taylor eval(const Taylor& x) const;
    double eval(double r) const;
    Jet3 eval_jet3(double r) const;

    std::string to_string() const;
    bool empty() const { return !root_; }
    bool is_constant() const;

private:
    std::shared_ptr<const ExprNode> root_;
};

// Free names other than r, pi, e must appear in bindings.
Expression parse(const std::string& source, const std::map<std::string, double>& bindings = {});

Jet3 eval_jet3(const Expression& e, double r);

// A function of r usable on series arguments.
using ScalarFn = std::function<Taylor(const Taylor&)>;

ScalarFn as_scalar_fn(const Expression& e);
ScalarFn constant_fn(double v);

}  // namespace cohom

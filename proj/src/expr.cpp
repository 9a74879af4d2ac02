#include "cohom/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "cohom/errors.hpp"

namespace cohom {

enum class Op { num, var, add, sub, mul, div, pow, neg, call };

struct ExprNode {
    Op op;
    double value = 0.0;
    std::string name;  // function name or the printed spelling of a named constant
    std::vector<std::shared_ptr<const ExprNode>> args;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

const char* const kFunctions[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "pow", "abs"};

NodePtr make(Op op, std::vector<NodePtr> args, std::string name = {}, double v = 0.0) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->value = v;
    n->name = std::move(name);
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    Parser(const std::string& s, const std::map<std::string, double>& b) : s_(s), bindings_(b) {}

    NodePtr parse_all() {
        NodePtr e = expression();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    const std::map<std::string, double>& bindings_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Op::add, {lhs, term()});
            else if (accept('-')) lhs = make(Op::sub, {lhs, term()});
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Op::mul, {lhs, unary()});
            else if (accept('/')) lhs = make(Op::div, {lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::neg, {unary()});
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Op::pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
            if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
                pos_ = q;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return make(Op::num, {}, {}, v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string id = s_.substr(start, pos_ - start);
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            bool known = false;
            for (const char* f : kFunctions) known = known || id == f;
            if (!known) {
                pos_ = start;
                fail("unknown function '" + id + "'");
            }
            ++pos_;
            std::vector<NodePtr> args{expression()};
            while (accept(',')) args.push_back(expression());
            expect(')');
            const std::size_t want = id == "pow" ? 2 : 1;
            if (args.size() != want) {
                pos_ = start;
                fail("function '" + id + "' takes " + std::to_string(want) + " argument(s)");
            }
            return make(Op::call, std::move(args), id);
        }
        if (id == "r") return make(Op::var, {});
        if (id == "pi") return make(Op::num, {}, "pi", std::numbers::pi);
        if (id == "e") return make(Op::num, {}, "e", std::numbers::e);
        auto it = bindings_.find(id);
        if (it != bindings_.end()) return make(Op::num, {}, {}, it->second);
        pos_ = start;
        fail("unknown identifier '" + id + "'");
    }
};

Taylor eval_node(const ExprNode& n, const Taylor& x) {
    switch (n.op) {
        case Op::num: return Taylor(x.order(), n.value);
        case Op::var: return x;
        case Op::add: return eval_node(*n.args[0], x) + eval_node(*n.args[1], x);
        case Op::sub: return eval_node(*n.args[0], x) - eval_node(*n.args[1], x);
        case Op::mul: return eval_node(*n.args[0], x) * eval_node(*n.args[1], x);
        case Op::div: return eval_node(*n.args[0], x) / eval_node(*n.args[1], x);
        case Op::neg: return -eval_node(*n.args[0], x);
        case Op::pow: return pow(eval_node(*n.args[0], x), eval_node(*n.args[1], x));
        case Op::call: {
            const Taylor a = eval_node(*n.args[0], x);
            const std::string& f = n.name;
            if (f == "sin") return sin(a);
            if (f == "cos") return cos(a);
            if (f == "tan") {
                if (std::cos(a[0]) == 0.0) throw EvalError("tan pole", x[0]);
                return tan(a);
            }
            if (f == "exp") return exp(a);
            if (f == "log") return log(a);
            if (f == "sqrt") return sqrt(a);
            if (f == "abs") return abs(a);
            return pow(a, eval_node(*n.args[1], x));
        }
    }
    return Taylor(x.order(), 0.0);
}

int precedence(const ExprNode& n) {
    switch (n.op) {
        case Op::add:
        case Op::sub: return 1;
        case Op::mul:
        case Op::div: return 2;
        case Op::neg: return 3;
        case Op::pow: return 4;
        case Op::num: return n.value < 0.0 ? 3 : 5;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (s == "inf" || s == "-inf" || s == "nan") return "(" + s + ")";
    return s;
}

std::string print(const ExprNode& n);

std::string wrap(const ExprNode& n, bool paren) { return paren ? "(" + print(n) + ")" : print(n); }

std::string print(const ExprNode& n) {
    const int p = precedence(n);
    switch (n.op) {
        case Op::num:
            if (!n.name.empty()) return n.name;
            return format_number(n.value);
        case Op::var: return "r";
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::div: {
            const char* sym = n.op == Op::add ? " + " : n.op == Op::sub ? " - " : n.op == Op::mul ? "*" : "/";
            return wrap(*n.args[0], precedence(*n.args[0]) < p) + sym + wrap(*n.args[1], precedence(*n.args[1]) <= p);
        }
        case Op::neg: return "-" + wrap(*n.args[0], precedence(*n.args[0]) < p);
        case Op::pow: return wrap(*n.args[0], precedence(*n.args[0]) <= p) + "^" + wrap(*n.args[1], precedence(*n.args[1]) < 3);
        case Op::call: {
            std::string s = n.name + "(" + print(*n.args[0]);
            for (std::size_t i = 1; i < n.args.size(); ++i) s += ", " + print(*n.args[i]);
            return s + ")";
        }
    }
    return {};
}

bool depends_on_r(const ExprNode& n) {
    if (n.op == Op::var) return true;
    for (const auto& a : n.args)
        if (depends_on_r(*a)) return true;
    return false;
}

}  // namespace

Expression Expression::constant(double v) { return Expression(make(Op::num, {}, {}, v)); }

Taylor Expression::eval(const Taylor& x) const {
    if (!root_) throw ValidationError("empty expression");
    try {
        return eval_node(*root_, x);
    } catch (const EvalError& e) {
        throw EvalError(std::string(e.what()) + " at r = " + format_number(x[0]), x[0]);
    }
}

double Expression::eval(double r) const { return eval(Taylor(0, r)).value(); }

Jet3 Expression::eval_jet3(double r) const { return to_jet3(eval(Taylor::variable(r, 3))); }

std::string Expression::to_string() const { return root_ ? print(*root_) : std::string(); }

bool Expression::is_constant() const { return root_ && !depends_on_r(*root_); }

Expression parse(const std::string& source, const std::map<std::string, double>& bindings) {
    Parser p(source, bindings);
    return Expression(p.parse_all());
}

Jet3 eval_jet3(const Expression& e, double r) { return e.eval_jet3(r); }

ScalarFn as_scalar_fn(const Expression& e) {
    return [e](const Taylor& x) { return e.eval(x); };
}

ScalarFn constant_fn(double v) {
    return [v](const Taylor& x) { return Taylor(x.order(), v); };
}

}  // namespace cohom

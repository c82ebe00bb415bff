#include "jacobi3/expr.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "jacobi3/errors.hpp"

namespace jacobi3 {

namespace {

std::size_t combine(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::shared_ptr<const ExprNode> make_node(Op op, Var var, double value, std::shared_ptr<const ExprNode> a,
                                          std::shared_ptr<const ExprNode> b)
{
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->var = var;
    n->value = value;
    std::size_t h = combine(0x51ed27u, static_cast<std::size_t>(op));
    if (op == Op::constant) {
        // +0 and -0 hash alike; they compare equal.
        h = combine(h, value == 0.0 ? 0 : std::bit_cast<std::uint64_t>(value));
    } else if (op == Op::variable) {
        h = combine(h, static_cast<std::size_t>(var));
    }
    if (a) h = combine(h, a->hash);
    if (b) h = combine(h, b->hash);
    n->hash = h;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

const std::shared_ptr<const ExprNode>& zero_node()
{
    static const auto zero = make_node(Op::constant, Var::x, 0.0, nullptr, nullptr);
    return zero;
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

} // namespace

std::string_view var_name(Var v)
{
    static constexpr std::array<std::string_view, var_count> names{"x", "y", "z", "u", "v", "t"};
    return names[static_cast<std::size_t>(v)];
}

bool is_unary(Op op) { return op >= Op::neg && op <= Op::sign; }
bool is_binary(Op op) { return op >= Op::add; }

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(double value) : node_(make_node(Op::constant, Var::x, value, nullptr, nullptr)) {}

Expr Expr::variable(Var v) { return Expr(make_node(Op::variable, v, 0.0, nullptr, nullptr)); }

Expr Expr::unary(Op op, Expr arg)
{
    if (!is_unary(op)) throw std::invalid_argument("Expr::unary: not a unary operator");
    return Expr(make_node(op, Var::x, 0.0, std::move(arg.node_), nullptr));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs)
{
    if (!is_binary(op)) throw std::invalid_argument("Expr::binary: not a binary operator");
    return Expr(make_node(op, Var::x, 0.0, std::move(lhs.node_), std::move(rhs.node_)));
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
Var Expr::var() const { return node_->var; }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }
std::size_t Expr::hash() const { return node_->hash; }

bool structurally_equal(const Expr& a, const Expr& b)
{
    const ExprNode* p = a.node();
    const ExprNode* q = b.node();
    std::function<bool(const ExprNode*, const ExprNode*)> eq = [&](const ExprNode* m, const ExprNode* n) -> bool {
        if (m == n) return true;
        if (m->hash != n->hash || m->op != n->op) return false;
        switch (m->op) {
        case Op::constant:
            return m->value == n->value;
        case Op::variable:
            return m->var == n->var;
        default:
            break;
        }
        if (!eq(m->a.get(), n->a.get())) return false;
        return !m->b || eq(m->b.get(), n->b.get());
    };
    return eq(p, q);
}

// ---------------------------------------------------------------------------
// Simplifying constructors

Expr operator-(const Expr& a)
{
    if (a.is_constant()) return Expr(-a.value());
    if (a.op() == Op::neg) return a.lhs();
    return Expr::unary(Op::neg, a);
}

Expr operator+(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    if (b.op() == Op::neg) return a - b.lhs();
    if (a.op() == Op::neg) return b - a.lhs();
    return Expr::binary(Op::add, a, b);
}

namespace {

void collect_addends(const Expr& e, std::vector<Expr>& out)
{
    if (e.op() == Op::add && out.size() < 64) {
        collect_addends(e.lhs(), out);
        collect_addends(e.rhs(), out);
    } else {
        out.push_back(e);
    }
}

/// True when two sums have the same addends in any order.
bool same_sum(const Expr& a, const Expr& b)
{
    if (a.op() != Op::add || b.op() != Op::add) return false;
    std::vector<Expr> ta;
    std::vector<Expr> tb;
    collect_addends(a, ta);
    collect_addends(b, tb);
    if (ta.size() != tb.size()) return false;
    std::vector<bool> used(tb.size(), false);
    for (const Expr& t : ta) {
        bool found = false;
        for (std::size_t i = 0; i < tb.size() && !found; ++i) {
            if (!used[i] && structurally_equal(t, tb[i])) used[i] = found = true;
        }
        if (!found) return false;
    }
    return true;
}

} // namespace

Expr operator-(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    if (b.op() == Op::neg) return a + b.lhs();
    if (structurally_equal(a, b) || same_sum(a, b)) return Expr(0.0);
    return Expr::binary(Op::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant()) return Expr(a.value() * b.value());
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(-1.0)) return -b;
    if (b.is_constant(-1.0)) return -a;
    if (a.op() == Op::neg) return -(a.lhs() * b);
    if (b.op() == Op::neg) return -(a * b.lhs());
    if (b.is_constant()) return b * a;
    if (a.is_constant() && b.op() == Op::mul && b.lhs().is_constant()) return Expr(a.value() * b.lhs().value()) * b.rhs();
    if (a.is_constant() && a.value() < 0.0) return -(Expr(-a.value()) * b);
    return Expr::binary(Op::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b)
{
    if (b.is_constant(0.0)) return Expr::binary(Op::div, a, b); // kept; evaluation reports the error
    if (a.is_constant() && b.is_constant()) return Expr(a.value() / b.value());
    if (a.is_constant(0.0)) return Expr(0.0);
    if (b.is_constant(1.0)) return a;
    if (b.is_constant(-1.0)) return -a;
    if (a.op() == Op::neg) return -(a.lhs() / b);
    if (b.op() == Op::neg) return -(a / b.lhs());
    if (a.is_constant() && a.value() < 0.0) return -(Expr(-a.value()) / b);
    if (b.is_constant() && b.value() < 0.0) return -(a / Expr(-b.value()));
    return Expr::binary(Op::div, a, b);
}

Expr pow(const Expr& base, const Expr& exponent)
{
    if (exponent.is_constant(0.0)) return Expr(1.0);
    if (exponent.is_constant(1.0)) return base;
    if (base.is_constant(1.0)) return Expr(1.0);
    if (base.is_constant() && exponent.is_constant()) {
        const double b = base.value();
        const double e = exponent.value();
        if ((b > 0.0 || (b < 0.0 && is_integer(e)) || (b == 0.0 && e > 0.0))) return Expr(std::pow(b, e));
    }
    return Expr::binary(Op::pow, base, exponent);
}

Expr apply(Op op, const Expr& a)
{
    if (op == Op::neg) return -a;
    if (a.is_constant()) {
        const double v = a.value();
        switch (op) {
        case Op::sin:
            return Expr(std::sin(v));
        case Op::cos:
            return Expr(std::cos(v));
        case Op::tan:
            return Expr(std::tan(v));
        case Op::exp:
            return Expr(std::exp(v));
        case Op::ln:
            if (v > 0.0) return Expr(std::log(v));
            break;
        case Op::sqrt:
            if (v >= 0.0) return Expr(std::sqrt(v));
            break;
        case Op::abs:
            return Expr(std::fabs(v));
        case Op::sign:
            return Expr(v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0));
        default:
            break;
        }
    }
    if (op == Op::abs && a.op() == Op::neg) return apply(Op::abs, a.lhs());
    return Expr::unary(op, a);
}

Expr atan2(const Expr& y, const Expr& x)
{
    if (y.is_constant() && x.is_constant()) return Expr(std::atan2(y.value(), x.value()));
    return Expr::binary(Op::atan2, y, x);
}

Expr sin(const Expr& a) { return apply(Op::sin, a); }
Expr cos(const Expr& a) { return apply(Op::cos, a); }
Expr exp(const Expr& a) { return apply(Op::exp, a); }
Expr ln(const Expr& a) { return apply(Op::ln, a); }
Expr sqrt(const Expr& a) { return apply(Op::sqrt, a); }

VarSet variables(const Expr& e)
{
    VarSet out = 0;
    std::unordered_set<const ExprNode*> seen;
    std::vector<const ExprNode*> stack{e.node()};
    while (!stack.empty()) {
        const ExprNode* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->op == Op::variable) out |= var_bit(n->var);
        if (n->a) stack.push_back(n->a.get());
        if (n->b) stack.push_back(n->b.get());
    }
    return out;
}

std::size_t dag_size(const Expr& e)
{
    std::unordered_set<const ExprNode*> seen;
    std::vector<const ExprNode*> stack{e.node()};
    while (!stack.empty()) {
        const ExprNode* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->a) stack.push_back(n->a.get());
        if (n->b) stack.push_back(n->b.get());
    }
    return seen.size();
}

// ---------------------------------------------------------------------------
// Binding / eval

Binding::Binding(double x, double y, double z)
{
    set(Var::x, x);
    set(Var::y, y);
    set(Var::z, z);
}

Binding::Binding(const std::map<std::string, double>& values)
{
    for (const auto& [name, value] : values) {
        bool found = false;
        for (std::size_t i = 0; i < var_count; ++i) {
            if (var_name(static_cast<Var>(i)) == name) {
                set(static_cast<Var>(i), value);
                found = true;
            }
        }
        if (!found) throw UnknownIdentifier(name, 0);
    }
}

Binding& Binding::set(Var v, double value)
{
    values_[static_cast<std::size_t>(v)] = value;
    mask_ |= var_bit(v);
    return *this;
}

double eval(const Expr& e, const Binding& binding)
{
    const Program program{e};
    return program(binding).front();
}

double eval(const Expr& e, const std::map<std::string, double>& binding) { return eval(e, Binding(binding)); }

} // namespace jacobi3

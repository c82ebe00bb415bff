#include <unordered_map>

#include "jacobi3/expr.hpp"

namespace jacobi3 {

namespace {

Expr rebuild(Op op, const Expr& a, const Expr& b)
{
    switch (op) {
    case Op::add:
        return a + b;
    case Op::sub:
        return a - b;
    case Op::mul:
        return a * b;
    case Op::div:
        return a / b;
    case Op::pow:
        return pow(a, b);
    case Op::atan2:
        return atan2(a, b);
    default:
        return apply(op, a);
    }
}

/// Bottom-up rewrite over the DAG; each shared node is visited once.
template <class Leaf>
class Rewriter {
public:
    explicit Rewriter(Leaf leaf) : leaf_(std::move(leaf)) {}

    Expr operator()(const Expr& e)
    {
        if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
        Expr out;
        if (e.op() == Op::constant || e.op() == Op::variable) {
            out = leaf_(e);
        } else if (is_unary(e.op())) {
            out = rebuild(e.op(), (*this)(e.lhs()), Expr());
        } else {
            out = rebuild(e.op(), (*this)(e.lhs()), (*this)(e.rhs()));
        }
        memo_.emplace(e.node(), out);
        return out;
    }

private:
    Leaf leaf_;
    std::unordered_map<const ExprNode*, Expr> memo_;
};

class Differentiator {
public:
    explicit Differentiator(Var var) : var_(var) {}

    Expr operator()(const Expr& e)
    {
        if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
        Expr d = derive(e);
        memo_.emplace(e.node(), d);
        return d;
    }

private:
    Expr derive(const Expr& e)
    {
        switch (e.op()) {
        case Op::constant:
            return Expr(0.0);
        case Op::variable:
            return Expr(e.var() == var_ ? 1.0 : 0.0);
        default:
            break;
        }
        const Expr a = e.lhs();
        const Expr da = (*this)(a);
        if (is_unary(e.op()) && da.is_constant(0.0)) return Expr(0.0);
        switch (e.op()) {
        case Op::neg:
            return -da;
        case Op::sin:
            return cos(a) * da;
        case Op::cos:
            return -(sin(a) * da);
        case Op::tan:
            return da / pow(cos(a), Expr(2.0));
        case Op::exp:
            return exp(a) * da;
        case Op::ln:
            return da / a;
        case Op::sqrt:
            return da / (Expr(2.0) * sqrt(a));
        case Op::abs:
            return apply(Op::sign, a) * da;
        case Op::sign:
            return Expr(0.0);
        default:
            break;
        }
        const Expr b = e.rhs();
        const Expr db = (*this)(b);
        switch (e.op()) {
        case Op::add:
            return da + db;
        case Op::sub:
            return da - db;
        case Op::mul:
            return da * b + a * db;
        case Op::div:
            if (db.is_constant(0.0)) return da / b;
            return (da * b - a * db) / pow(b, Expr(2.0));
        case Op::pow:
            if (b.is_constant()) return Expr(b.value()) * pow(a, Expr(b.value() - 1.0)) * da;
            // d(a^b) = a^b (b' ln a + b a'/a)
            return e * (db * ln(a) + b * da / a);
        case Op::atan2:
            // atan2(a, b): (b a' - a b') / (a^2 + b^2)
            return (b * da - a * db) / (pow(a, Expr(2.0)) + pow(b, Expr(2.0)));
        default:
            return Expr(0.0);
        }
    }

    Var var_;
    std::unordered_map<const ExprNode*, Expr> memo_;
};

} // namespace

Expr simplify(const Expr& e)
{
    Rewriter rw([](const Expr& leaf) { return leaf; });
    return rw(e);
}

Expr diff(const Expr& e, Var var)
{
    // Simplify first so raw parser trees differentiate like constructed ones.
    Differentiator d(var);
    return d(simplify(e));
}

Expr substitute(const Expr& e, Var var, const Expr& replacement)
{
    const Expr inserted = simplify(replacement);
    Rewriter rw([&](const Expr& leaf) {
        if (leaf.op() == Op::variable && leaf.var() == var) return inserted;
        return leaf;
    });
    return rw(e);
}

} // namespace jacobi3

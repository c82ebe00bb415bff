#include <charconv>
#include <cmath>
#include <string>

#include "jacobi3/expr.hpp"

namespace jacobi3 {

namespace {

// Binding strength of the printed form; a child is parenthesised when its
// level is below what the grammar accepts in that slot.
enum Level : int { sum = 1, product = 2, prefix = 3, power_level = 4, atom = 5 };

int level(const Expr& e)
{
    switch (e.op()) {
    case Op::constant:
        return e.value() < 0.0 || std::signbit(e.value()) ? prefix : atom;
    case Op::add:
    case Op::sub:
        return sum;
    case Op::mul:
    case Op::div:
        return product;
    case Op::neg:
        return prefix;
    case Op::pow:
        return power_level;
    default:
        return atom;
    }
}

std::string_view function_name(Op op)
{
    switch (op) {
    case Op::sin:
        return "sin";
    case Op::cos:
        return "cos";
    case Op::tan:
        return "tan";
    case Op::exp:
        return "exp";
    case Op::ln:
        return "ln";
    case Op::sqrt:
        return "sqrt";
    case Op::abs:
        return "abs";
    case Op::sign:
        return "sign";
    case Op::atan2:
        return "atan2";
    default:
        return "?";
    }
}

void render(const Expr& e, std::string& out);

void render_at(const Expr& e, int min_level, std::string& out)
{
    if (level(e) < min_level) {
        out += '(';
        render(e, out);
        out += ')';
    } else {
        render(e, out);
    }
}

void render(const Expr& e, std::string& out)
{
    switch (e.op()) {
    case Op::constant: {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, e.value());
        out.append(buf, res.ptr);
        return;
    }
    case Op::variable:
        out += var_name(e.var());
        return;
    case Op::neg:
        out += '-';
        render_at(e.lhs(), prefix, out);
        return;
    case Op::add:
    case Op::sub:
        render_at(e.lhs(), sum, out);
        out += e.op() == Op::add ? '+' : '-';
        render_at(e.rhs(), product, out);
        return;
    case Op::mul:
    case Op::div:
        render_at(e.lhs(), product, out);
        out += e.op() == Op::mul ? '*' : '/';
        render_at(e.rhs(), prefix, out);
        return;
    case Op::pow:
        render_at(e.lhs(), atom, out);
        out += '^';
        render_at(e.rhs(), prefix, out);
        return;
    case Op::atan2:
        out += "atan2(";
        render(e.lhs(), out);
        out += ',';
        render(e.rhs(), out);
        out += ')';
        return;
    default:
        out += function_name(e.op());
        out += '(';
        render(e.lhs(), out);
        out += ')';
        return;
    }
}

} // namespace

std::string to_string(const Expr& e)
{
    std::string out;
    render(e, out);
    return out;
}

} // namespace jacobi3

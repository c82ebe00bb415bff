#pragma once

// Expression trees over the coordinate alphabet {x, y, z, u, v, t}: parsing,
// printing, evaluation and exact symbolic differentiation.
//
// Expr is an immutable handle; subtrees are shared, so derivative chains form
// DAGs rather than exponentially growing trees. Every function in this header
// is pure and safe to call concurrently.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jacobi3 {

enum class Var : std::uint8_t { x, y, z, u, v, t };
inline constexpr std::size_t var_count = 6;

enum class Op : std::uint8_t {
    constant,
    variable,
    // unary
    neg,
    sin,
    cos,
    tan,
    exp,
    ln,
    sqrt,
    abs,
    sign,
    // binary
    add,
    sub,
    mul,
    div,
    pow,
    atan2,
};

[[nodiscard]] std::string_view var_name(Var v);
[[nodiscard]] bool is_unary(Op op);
[[nodiscard]] bool is_binary(Op op);

/// Bit set of variables, bit i <-> Var(i).
using VarSet = std::uint8_t;
[[nodiscard]] constexpr VarSet var_bit(Var v) { return static_cast<VarSet>(1u << static_cast<unsigned>(v)); }
inline constexpr VarSet xyz_vars = var_bit(Var::x) | var_bit(Var::y) | var_bit(Var::z);
inline constexpr VarSet uv_vars = var_bit(Var::u) | var_bit(Var::v);

struct ExprNode;

class Expr {
public:
    /// The constant 0.
    Expr();
    Expr(double value); // NOLINT(google-explicit-constructor)

    [[nodiscard]] static Expr variable(Var v);
    /// Raw constructors; no simplification. The parser uses these.
    [[nodiscard]] static Expr unary(Op op, Expr arg);
    [[nodiscard]] static Expr binary(Op op, Expr lhs, Expr rhs);

    [[nodiscard]] Op op() const;
    [[nodiscard]] double value() const; ///< valid for Op::constant
    [[nodiscard]] Var var() const;      ///< valid for Op::variable
    [[nodiscard]] Expr lhs() const;
    [[nodiscard]] Expr rhs() const;
    [[nodiscard]] std::size_t hash() const;
    [[nodiscard]] const ExprNode* node() const { return node_.get(); }

    [[nodiscard]] bool is_constant() const { return op() == Op::constant; }
    [[nodiscard]] bool is_constant(double c) const { return is_constant() && value() == c; }

    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

private:
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    Op op = Op::constant;
    Var var = Var::x;
    double value = 0.0;
    std::shared_ptr<const ExprNode> a;
    std::shared_ptr<const ExprNode> b;
    std::size_t hash = 0;
};

[[nodiscard]] bool structurally_equal(const Expr& a, const Expr& b);

// Simplifying constructors: constant folding, 0/1 elimination, sign hoisting.
[[nodiscard]] Expr operator+(const Expr& a, const Expr& b);
[[nodiscard]] Expr operator-(const Expr& a, const Expr& b);
[[nodiscard]] Expr operator*(const Expr& a, const Expr& b);
[[nodiscard]] Expr operator/(const Expr& a, const Expr& b);
[[nodiscard]] Expr operator-(const Expr& a);
[[nodiscard]] Expr pow(const Expr& base, const Expr& exponent);
[[nodiscard]] Expr apply(Op op, const Expr& arg);
[[nodiscard]] Expr atan2(const Expr& y, const Expr& x);
[[nodiscard]] Expr sin(const Expr& a);
[[nodiscard]] Expr cos(const Expr& a);
[[nodiscard]] Expr exp(const Expr& a);
[[nodiscard]] Expr ln(const Expr& a);
[[nodiscard]] Expr sqrt(const Expr& a);

/// Parses the grammar
///   expr := term (("+"|"-") term)* ; term := unary (("*"|"/") unary)* ;
///   unary := "-" unary | power ; power := atom ("^" unary)? ;
///   atom := NUMBER | IDENT | IDENT "(" expr ("," expr)? ")" | "(" expr ")"
/// into the raw (unsimplified) tree. `pi` and `e` fold to literals.
/// Throws SyntaxError or UnknownIdentifier.
[[nodiscard]] Expr parse(std::string_view source);

/// Parses and additionally checks that only variables in `allowed` occur.
[[nodiscard]] Expr parse(std::string_view source, VarSet allowed);

/// Minimal-parenthesis rendering that reparses to the same tree.
[[nodiscard]] std::string to_string(const Expr& e);

[[nodiscard]] Expr simplify(const Expr& e);
[[nodiscard]] Expr diff(const Expr& e, Var var);
[[nodiscard]] Expr substitute(const Expr& e, Var var, const Expr& replacement);
[[nodiscard]] VarSet variables(const Expr& e);
/// Number of distinct nodes reachable from e.
[[nodiscard]] std::size_t dag_size(const Expr& e);

/// Values for the variables of the alphabet; unbound slots are tracked.
class Binding {
public:
    Binding() = default;
    Binding(double x, double y, double z);
    Binding(const std::map<std::string, double>& values);
    Binding& set(Var v, double value);
    [[nodiscard]] double get(Var v) const { return values_[static_cast<std::size_t>(v)]; }
    [[nodiscard]] bool bound(Var v) const { return (mask_ & var_bit(v)) != 0; }
    [[nodiscard]] VarSet mask() const { return mask_; }

private:
    std::array<double, var_count> values_{};
    VarSet mask_ = 0;
};

/// Evaluates with IEEE doubles. Throws EvalDomainError for ln(<=0), sqrt(<0),
/// division by zero and negative bases raised to non-integer powers; throws
/// MissingBinding when a used variable is unbound.
[[nodiscard]] double eval(const Expr& e, const Binding& binding);
[[nodiscard]] double eval(const Expr& e, const std::map<std::string, double>& binding);

/// A set of expressions flattened into one instruction tape with common
/// subexpressions merged. Evaluation is const and reentrant.
class Program {
public:
    Program() = default;
    explicit Program(std::span<const Expr> outputs);
    Program(std::initializer_list<Expr> outputs);

    [[nodiscard]] std::size_t output_count() const { return outputs_.size(); }
    [[nodiscard]] std::size_t instruction_count() const { return code_.size(); }
    [[nodiscard]] VarSet variables() const { return used_; }

    void evaluate(const Binding& binding, std::span<double> out, std::vector<double>& scratch) const;
    [[nodiscard]] std::vector<double> operator()(const Binding& binding) const;

private:
    struct Instr {
        Op op;
        Var var;
        std::uint32_t a;
        std::uint32_t b;
        double value;
    };
    void compile(std::span<const Expr> outputs);

    std::vector<Instr> code_;
    std::vector<std::uint32_t> outputs_;
    VarSet used_ = 0;
};

} // namespace jacobi3

#pragma once

// Scalar and vector fields on R^3 with exact symbolic vector calculus.

#include <array>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "jacobi3/expr.hpp"
#include "jacobi3/point.hpp"

namespace jacobi3 {

/// An expression in x, y, z only.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(double c) : expr_(c) {} // NOLINT(google-explicit-constructor)
    /// Throws std::invalid_argument if `e` uses u, v or t.
    explicit ScalarField(Expr e);

    [[nodiscard]] static ScalarField parse(std::string_view source);

    [[nodiscard]] const Expr& expr() const { return expr_; }
    /// One-off evaluation; compile a FieldProgram for repeated use.
    [[nodiscard]] double operator()(const Point3& p) const;

private:
    Expr expr_;
};

[[nodiscard]] ScalarField operator+(const ScalarField& a, const ScalarField& b);
[[nodiscard]] ScalarField operator-(const ScalarField& a, const ScalarField& b);
[[nodiscard]] ScalarField operator*(const ScalarField& a, const ScalarField& b);
[[nodiscard]] ScalarField operator/(const ScalarField& a, const ScalarField& b);
[[nodiscard]] ScalarField operator-(const ScalarField& a);
[[nodiscard]] std::string to_string(const ScalarField& f);

class VectorField3 {
public:
    VectorField3() = default;
    VectorField3(ScalarField x, ScalarField y, ScalarField z) : c_{std::move(x), std::move(y), std::move(z)} {}

    [[nodiscard]] static VectorField3 parse(std::string_view x, std::string_view y, std::string_view z);

    [[nodiscard]] const ScalarField& operator[](std::size_t i) const { return c_[i]; }
    [[nodiscard]] std::array<double, 3> operator()(const Point3& p) const;

private:
    std::array<ScalarField, 3> c_;
};

[[nodiscard]] VectorField3 operator+(const VectorField3& a, const VectorField3& b);
[[nodiscard]] VectorField3 operator-(const VectorField3& a, const VectorField3& b);
[[nodiscard]] VectorField3 operator-(const VectorField3& a);
[[nodiscard]] std::string to_string(const VectorField3& f);

[[nodiscard]] ScalarField partial(const ScalarField& f, Var var);
[[nodiscard]] VectorField3 grad(const ScalarField& f);
[[nodiscard]] VectorField3 curl(const VectorField3& a);
[[nodiscard]] ScalarField div(const VectorField3& a);
[[nodiscard]] ScalarField dot(const VectorField3& a, const VectorField3& b);
[[nodiscard]] VectorField3 cross(const VectorField3& a, const VectorField3& b);
[[nodiscard]] VectorField3 scale(const ScalarField& f, const VectorField3& a);
/// a . (curl a)
[[nodiscard]] ScalarField helicity(const VectorField3& a);
[[nodiscard]] ScalarField norm_squared(const VectorField3& a);

/// Compiled evaluator for a fixed list of scalar fields.
class FieldProgram {
public:
    FieldProgram() = default;
    explicit FieldProgram(std::span<const ScalarField> fields);
    FieldProgram(std::initializer_list<ScalarField> fields);

    /// Appends the three components; returns the index of the first one.
    std::size_t add(const VectorField3& v);
    std::size_t add(const ScalarField& f);
    /// Must be called after the last add() and before evaluation.
    void finalize();

    [[nodiscard]] std::size_t size() const { return exprs_.size(); }
    void evaluate(const Point3& p, std::span<double> out, std::vector<double>& scratch) const;
    [[nodiscard]] std::vector<double> operator()(const Point3& p) const;

private:
    std::vector<Expr> exprs_;
    Program program_;
};

namespace vec {
using V3 = std::array<double, 3>;
[[nodiscard]] inline double dot(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
[[nodiscard]] inline V3 cross(const V3& a, const V3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
[[nodiscard]] inline double norm(const V3& a) { return std::sqrt(dot(a, a)); }
[[nodiscard]] inline V3 at(std::span<const double> values, std::size_t first)
{
    return {values[first], values[first + 1], values[first + 2]};
}
} // namespace vec

} // namespace jacobi3

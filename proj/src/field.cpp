#include "jacobi3/field.hpp"

#include <stdexcept>

namespace jacobi3 {

ScalarField::ScalarField(Expr e) : expr_(std::move(e))
{
    if ((variables(expr_) & static_cast<VarSet>(~xyz_vars)) != 0) {
        throw std::invalid_argument("scalar field may only use x, y, z: " + to_string(expr_));
    }
}

ScalarField ScalarField::parse(std::string_view source) { return ScalarField(jacobi3::parse(source, xyz_vars)); }

double ScalarField::operator()(const Point3& p) const { return eval(expr_, Binding(p.x, p.y, p.z)); }

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return ScalarField(a.expr() + b.expr()); }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return ScalarField(a.expr() - b.expr()); }
ScalarField operator*(const ScalarField& a, const ScalarField& b) { return ScalarField(a.expr() * b.expr()); }
ScalarField operator/(const ScalarField& a, const ScalarField& b) { return ScalarField(a.expr() / b.expr()); }
ScalarField operator-(const ScalarField& a) { return ScalarField(-a.expr()); }
std::string to_string(const ScalarField& f) { return to_string(f.expr()); }

VectorField3 VectorField3::parse(std::string_view x, std::string_view y, std::string_view z)
{
    return {ScalarField::parse(x), ScalarField::parse(y), ScalarField::parse(z)};
}

std::array<double, 3> VectorField3::operator()(const Point3& p) const { return {c_[0](p), c_[1](p), c_[2](p)}; }

VectorField3 operator+(const VectorField3& a, const VectorField3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
VectorField3 operator-(const VectorField3& a, const VectorField3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
VectorField3 operator-(const VectorField3& a) { return {-a[0], -a[1], -a[2]}; }

std::string to_string(const VectorField3& f)
{
    return "(" + to_string(f[0]) + ", " + to_string(f[1]) + ", " + to_string(f[2]) + ")";
}

ScalarField partial(const ScalarField& f, Var var) { return ScalarField(diff(f.expr(), var)); }

VectorField3 grad(const ScalarField& f) { return {partial(f, Var::x), partial(f, Var::y), partial(f, Var::z)}; }

VectorField3 curl(const VectorField3& a)
{
    return {partial(a[2], Var::y) - partial(a[1], Var::z), partial(a[0], Var::z) - partial(a[2], Var::x),
            partial(a[1], Var::x) - partial(a[0], Var::y)};
}

ScalarField div(const VectorField3& a) { return partial(a[0], Var::x) + partial(a[1], Var::y) + partial(a[2], Var::z); }

ScalarField dot(const VectorField3& a, const VectorField3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

VectorField3 cross(const VectorField3& a, const VectorField3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

VectorField3 scale(const ScalarField& f, const VectorField3& a) { return {f * a[0], f * a[1], f * a[2]}; }

ScalarField helicity(const VectorField3& a) { return dot(a, curl(a)); }

ScalarField norm_squared(const VectorField3& a) { return dot(a, a); }

FieldProgram::FieldProgram(std::span<const ScalarField> fields)
{
    for (const auto& f : fields) add(f);
    finalize();
}

FieldProgram::FieldProgram(std::initializer_list<ScalarField> fields)
    : FieldProgram(std::span<const ScalarField>(fields.begin(), fields.size()))
{
}

std::size_t FieldProgram::add(const VectorField3& v)
{
    const std::size_t first = exprs_.size();
    for (std::size_t i = 0; i < 3; ++i) exprs_.push_back(v[i].expr());
    return first;
}

std::size_t FieldProgram::add(const ScalarField& f)
{
    exprs_.push_back(f.expr());
    return exprs_.size() - 1;
}

void FieldProgram::finalize() { program_ = Program(exprs_); }

void FieldProgram::evaluate(const Point3& p, std::span<double> out, std::vector<double>& scratch) const
{
    program_.evaluate(Binding(p.x, p.y, p.z), out, scratch);
}

std::vector<double> FieldProgram::operator()(const Point3& p) const { return program_(Binding(p.x, p.y, p.z)); }

} // namespace jacobi3

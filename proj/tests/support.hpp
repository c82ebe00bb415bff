#pragma once

// Shared fixtures for the test suites: a seeded stream, random expression
// generators and the catalogue of reference structures.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "jacobi3/expr.hpp"
#include "jacobi3/field.hpp"
#include "jacobi3/sampling.hpp"
#include "jacobi3/structure.hpp"

namespace jacobi3::testing {

class Stream {
public:
    explicit Stream(std::uint64_t seed) : seed_(seed) {}
    double uniform() { return uniform01(seed_, counter_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Random smooth expression in x, y, z that is defined and differentiable on
/// all of R^3 (arguments of ln, sqrt and denominators are kept positive).
inline Expr random_smooth_expr(Stream& s, int depth)
{
    const Expr x = Expr::variable(Var::x);
    const Expr y = Expr::variable(Var::y);
    const Expr z = Expr::variable(Var::z);
    if (depth == 0 || s.uniform() < 0.2) {
        switch (s.index(4)) {
        case 0:
            return x;
        case 1:
            return y;
        case 2:
            return z;
        default:
            return Expr(std::round(s.uniform(-3, 3) * 4) / 4);
        }
    }
    const Expr a = random_smooth_expr(s, depth - 1);
    const Expr one(1.0);
    switch (s.index(12)) {
    case 0:
        return a + random_smooth_expr(s, depth - 1);
    case 1:
        return a - random_smooth_expr(s, depth - 1);
    case 2:
    case 3:
        return a * random_smooth_expr(s, depth - 1);
    case 4: {
        const Expr b = random_smooth_expr(s, depth - 1);
        return a / (one + b * b);
    }
    case 5:
        return sin(a);
    case 6:
        return cos(a);
    case 7:
        return exp(sin(a));
    case 8:
        return ln(one + a * a);
    case 9:
        return sqrt(Expr(2.0) + cos(a));
    case 10:
        return pow(a, Expr(static_cast<double>(2 + s.index(2))));
    default:
        return atan2(a, Expr(2.0) + sin(random_smooth_expr(s, depth - 1)));
    }
}

inline Point3 random_point(Stream& s, double lo = -1.0, double hi = 1.0)
{
    const double x = s.uniform(lo, hi);
    const double y = s.uniform(lo, hi);
    return {x, y, s.uniform(lo, hi)};
}

/// Arnold-Beltrami-Childress field (a sin z + c cos y, b sin x + a cos z, c sin y + b cos x).
inline VectorField3 abc(double a, double b, double c)
{
    const Expr x = Expr::variable(Var::x);
    const Expr y = Expr::variable(Var::y);
    const Expr z = Expr::variable(Var::z);
    return {ScalarField(Expr(a) * sin(z) + Expr(c) * cos(y)), ScalarField(Expr(b) * sin(x) + Expr(a) * cos(z)),
            ScalarField(Expr(c) * sin(y) + Expr(b) * cos(x))};
}

inline SampleDomain domain(Point3 lo, Point3 hi, std::size_t samples = 1000, std::uint64_t seed = 1)
{
    return SampleDomain{Box{lo, hi}, samples, seed};
}

struct NamedStructure {
    std::string name;
    JacobiStructure structure;
};

/// Five rank-3 structures with sign-definite helicity on their boxes.
inline std::vector<NamedStructure> rank3_catalogue()
{
    std::vector<NamedStructure> out;
    out.push_back({"abc(1,1,1)", build_rank3(abc(1, 1, 1), domain({0.1, 0.1, 0.1}, {1.4, 1.4, 1.4}, 1000, 11))});
    out.push_back({"abc(1,0.7,0.4)", build_rank3(abc(1, 0.7, 0.4), domain({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}, 1000, 12))});
    out.push_back({"rotation+z", build_rank3(VectorField3::parse("-y", "x", "1"), domain({-1, -1, -1}, {1, 1, 1}, 1000, 13))});
    out.push_back({"exp-scaled rotation",
                   build_rank3(VectorField3::parse("-y*exp(x/2)", "x*exp(x/2)", "exp(x/2)"), domain({-1, -1, -1}, {1, 1, 1}, 1000, 14))});
    out.push_back({"polynomial", build_rank3(VectorField3::parse("z + y^2", "x", "y"), domain({0.5, 0.5, 0.5}, {1.5, 1.5, 1.5}, 1000, 15))});
    return out;
}

/// The cylinder example: mu = 1, xi1 = x, xi2 = y, psi = u^2 + v^2, on a box
/// away from the z-axis.
inline JacobiStructure cylinder(const SampleDomain& d = domain({0.5, 0.5, -1}, {2, 2, 1}, 1000, 21))
{
    return build_rank2(ScalarField(1.0), ScalarField::parse("x"), ScalarField::parse("y"), parse("u^2 + v^2", uv_vars), d);
}

/// Five rank-2 structures (A = mu grad psi) with mu and grad psi nonvanishing.
inline std::vector<NamedStructure> rank2_catalogue()
{
    std::vector<NamedStructure> out;
    out.push_back({"cylinder", cylinder()});
    out.push_back({"cylinder mu=exp(z)",
                   build_rank2(ScalarField::parse("exp(z)"), ScalarField::parse("x"), ScalarField::parse("y"),
                               parse("u^2 + v^2", uv_vars), domain({0.5, 0.5, -1}, {2, 2, 1}, 1000, 22))});
    out.push_back({"shear", build_rank2(ScalarField::parse("1 + x^2"), ScalarField::parse("x"), ScalarField::parse("y"),
                                        parse("u", uv_vars), domain({-1, -1, -1}, {1, 1, 1}, 1000, 23))});
    out.push_back({"trig", build_rank2(ScalarField::parse("2 + sin(x*y)"), ScalarField::parse("x + z^2"),
                                       ScalarField::parse("y - x*z"), parse("u + sin(v)/2", uv_vars),
                                       domain({-1, -1, -1}, {1, 1, 1}, 1000, 24))});
    out.push_back({"product", build_rank2(ScalarField::parse("exp(x - y)"), ScalarField::parse("y*z + 1"),
                                          ScalarField::parse("x"), parse("u*v + u", uv_vars),
                                          domain({0.5, 0.5, 0.5}, {1.5, 1.5, 1.5}, 1000, 25))});
    return out;
}

inline std::vector<NamedStructure> poisson_catalogue()
{
    std::vector<NamedStructure> out;
    out.push_back({"constant", build_poisson(ScalarField(1.0), ScalarField::parse("z"), domain({-1, -1, -1}, {1, 1, 1}))});
    out.push_back({"x^2+1 cylinder", build_poisson(ScalarField::parse("x^2 + 1"), ScalarField::parse("x^2 + y^2"),
                                                   domain({0.5, 0.5, -1}, {2, 2, 1}))});
    return out;
}

inline std::vector<NamedStructure> valid_catalogue()
{
    auto out = rank3_catalogue();
    for (auto& s : rank2_catalogue()) out.push_back(std::move(s));
    for (auto& s : poisson_catalogue()) out.push_back(std::move(s));
    return out;
}

/// ABC(1,1,1) with E = 0: A . curl A = |A|^2 != 0, so the first Jacobi equation fails.
inline JacobiStructure negative_control() { return build_custom(abc(1, 1, 1), VectorField3{}); }

inline double relative_error(double got, double want) { return std::fabs(got - want) / (1.0 + std::fabs(want)); }

} // namespace jacobi3::testing

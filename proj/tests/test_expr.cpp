#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "jacobi3/errors.hpp"
#include "jacobi3/expr.hpp"
#include "support.hpp"

using namespace jacobi3;
using jacobi3::testing::Stream;

namespace {

const Expr X = Expr::variable(Var::x);
const Expr Y = Expr::variable(Var::y);

double at(const Expr& e, const Point3& p) { return eval(e, Binding(p.x, p.y, p.z)); }

std::vector<std::string> golden_corpus()
{
    std::ifstream in(std::string(JACOBI3_TEST_DATA) + "/roundtrip.txt");
    REQUIRE(in.good());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.front() != '#') lines.push_back(line);
    }
    return lines;
}

} // namespace

TEST_CASE("parse builds the grammar tree")
{
    const Expr two(2.0);
    CHECK(structurally_equal(parse("x^2 + y^2"),
                             Expr::binary(Op::add, Expr::binary(Op::pow, X, two), Expr::binary(Op::pow, Y, two))));
    CHECK(structurally_equal(parse("sin(x)*cos(y) - 2"),
                             Expr::binary(Op::sub, Expr::binary(Op::mul, Expr::unary(Op::sin, X), Expr::unary(Op::cos, Y)),
                                          two)));
}

TEST_CASE("power is right associative and minus applies to the power")
{
    CHECK(eval(parse("2^3^2"), Binding{}) == 512.0);
    CHECK(eval(parse("-2^2"), Binding{}) == -4.0);
    CHECK(eval(parse("2^-1"), Binding{}) == 0.5);
    CHECK(eval(parse("-x^2"), Binding(3, 0, 0)) == -9.0);
    CHECK(eval(parse("2*-x"), Binding(3, 0, 0)) == -6.0);
}

TEST_CASE("whitespace is insignificant and constants fold")
{
    CHECK(structurally_equal(parse("  x\t+\n1 "), parse("x+1")));
    CHECK(parse("pi").value() == std::numbers::pi);
    CHECK(parse("e").value() == std::numbers::e);
    CHECK(eval(parse("2e-3"), Binding{}) == 2e-3);
    CHECK(eval(parse("1.5E2"), Binding{}) == 150.0);
}

TEST_CASE("implicit multiplication is a syntax error")
{
    CHECK_THROWS_AS((void)parse("x sin(z)"), SyntaxError);
    CHECK_THROWS_AS((void)parse("2x"), SyntaxError);
    CHECK_THROWS_AS((void)parse("(x)(y)"), SyntaxError);
}

TEST_CASE("syntax errors carry the byte offset")
{
    try {
        (void)parse("x + * y");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS((void)parse(""), SyntaxError);
    CHECK_THROWS_AS((void)parse("sin(x"), SyntaxError);
    CHECK_THROWS_AS((void)parse("atan2(x)"), SyntaxError);
    CHECK_THROWS_AS((void)parse("sin(x, y)"), SyntaxError);
    CHECK_THROWS_AS((void)parse("1.2.3"), SyntaxError);
}

TEST_CASE("unknown identifiers are rejected")
{
    try {
        (void)parse("x + a");
        FAIL("expected UnknownIdentifier");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name() == "a");
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS((void)parse("log(x)"), UnknownIdentifier);
    CHECK_THROWS_AS((void)parse("u + x", uv_vars), UnknownIdentifier);
    CHECK_NOTHROW((void)parse("u + v", uv_vars));
}

TEST_CASE("eval examples")
{
    CHECK(eval(parse("sin(x)*y"), {{"x", std::numbers::pi / 2}, {"y", 2.0}, {"z", 0.0}}) == doctest::Approx(2.0));
    CHECK(eval(parse("x^2+y^2"), {{"x", 3.0}, {"y", 4.0}, {"z", 0.0}}) == 25.0);
    CHECK(eval(parse("atan2(1, 0)"), Binding{}) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("eval domain errors")
{
    const Binding zero(0, 0, 0);
    CHECK_THROWS_AS((void)eval(parse("ln(x)"), zero), EvalDomainError);
    CHECK_THROWS_AS((void)eval(parse("ln(x - 1)"), zero), EvalDomainError);
    CHECK_THROWS_AS((void)eval(parse("sqrt(x - 1)"), zero), EvalDomainError);
    CHECK_THROWS_AS((void)eval(parse("1/x"), zero), EvalDomainError);
    CHECK_THROWS_AS((void)eval(parse("(x - 2)^0.5"), zero), EvalDomainError);
    CHECK(eval(parse("(x - 2)^3"), zero) == -8.0);
    CHECK(eval(parse("sqrt(x)"), zero) == 0.0);
}

TEST_CASE("missing bindings are reported")
{
    CHECK_THROWS_AS((void)eval(parse("x + y"), {{"x", 1.0}}), MissingBinding);
    CHECK_THROWS_AS((void)eval(parse("u"), Binding(1, 2, 3)), MissingBinding);
    CHECK(eval(parse("x"), {{"x", 1.0}}) == 1.0);
}

TEST_CASE("diff examples print in simplified form")
{
    CHECK(to_string(diff(parse("x^2 + y^2"), Var::x)) == "2*x");
    CHECK(to_string(diff(parse("sin(x)*cos(y)"), Var::y)) == "-(sin(x)*sin(y))");
    CHECK(to_string(diff(parse("x*y + 3"), Var::z)) == "0");
    CHECK(to_string(diff(parse("x"), Var::x)) == "1");
}

TEST_CASE("diff of abs uses sign with zero derivative at the kink")
{
    const Expr d = diff(parse("abs(x)"), Var::x);
    CHECK(eval(d, Binding(-2, 0, 0)) == -1.0);
    CHECK(eval(d, Binding(0, 0, 0)) == 0.0);
    CHECK(structurally_equal(parse(to_string(d)), d));
}

TEST_CASE("diff of general powers")
{
    const Expr d = diff(parse("x^y"), Var::y);
    CHECK(eval(d, Binding(2, 3, 0)) == doctest::Approx(8.0 * std::log(2.0)));
    const Expr dx = diff(parse("x^y"), Var::x);
    CHECK(eval(dx, Binding(2, 3, 0)) == doctest::Approx(12.0));
    const Expr da = diff(parse("atan2(y, x)"), Var::x);
    CHECK(eval(da, Binding(0, 1, 0)) == doctest::Approx(-1.0));
}

TEST_CASE("substitute examples")
{
    const Expr sq = substitute(substitute(parse("u^2+v^2", uv_vars), Var::u, X), Var::v, Y);
    CHECK(to_string(sq) == "x^2+y^2");
    CHECK(to_string(substitute(parse("u", uv_vars), Var::u, Expr::variable(Var::u))) == "u");
    CHECK(to_string(substitute(parse("sin(u)", uv_vars), Var::u, parse("x*y"))) == "sin(x*y)");
    CHECK(to_string(substitute(parse("u*v", uv_vars), Var::u, Expr::variable(Var::v))) == "v*v");
}

TEST_CASE("variables reports the used alphabet")
{
    CHECK(variables(parse("x + sin(z)")) == (var_bit(Var::x) | var_bit(Var::z)));
    CHECK(variables(parse("3")) == 0);
}

TEST_CASE("derivative chains share subtrees")
{
    Expr e = parse("sin(x*y)*exp(x + y)");
    for (int i = 0; i < 8; ++i) e = diff(e, i % 2 ? Var::x : Var::y);
    CHECK(dag_size(e) < 5000);
}

TEST_CASE("program merges shared outputs and evaluates them all")
{
    const Expr a = parse("sin(x) + y");
    const Program p{a, sin(X), a * a};
    CHECK(p.output_count() == 3);
    const auto out = p(Binding(0.3, 2, 0));
    CHECK(out[0] == doctest::Approx(std::sin(0.3) + 2));
    CHECK(out[1] == doctest::Approx(std::sin(0.3)));
    CHECK(out[2] == doctest::Approx(out[0] * out[0]));
}

TEST_CASE("property: symbolic derivative matches the central difference")
{
    Stream s(2024);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        const Expr e = testing::random_smooth_expr(s, 4);
        const Var v = static_cast<Var>(s.index(3));
        const Point3 p = testing::random_point(s);
        const double h = 1e-5;
        Point3 lo = p;
        Point3 hi = p;
        (v == Var::x ? lo.x : v == Var::y ? lo.y : lo.z) -= h;
        (v == Var::x ? hi.x : v == Var::y ? hi.y : hi.z) += h;
        const double fd = (at(e, hi) - at(e, lo)) / (2 * h);
        const double exact = at(diff(e, v), p);
        INFO(to_string(e));
        CHECK(std::fabs(exact - fd) <= 1e-5 * (1 + std::fabs(exact)));
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("property: diff is linear")
{
    Stream s(7);
    for (int i = 0; i < 100; ++i) {
        const Expr e1 = testing::random_smooth_expr(s, 3);
        const Expr e2 = testing::random_smooth_expr(s, 3);
        const double a = s.uniform(-2, 2);
        const double b = s.uniform(-2, 2);
        const Point3 p = testing::random_point(s);
        const double lhs = at(diff(Expr(a) * e1 + Expr(b) * e2, Var::x), p);
        const double rhs = a * at(diff(e1, Var::x), p) + b * at(diff(e2, Var::x), p);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1 + std::fabs(lhs) + std::fabs(a * at(diff(e1, Var::x), p))));
    }
}

TEST_CASE("property: mixed partials commute")
{
    Stream s(8);
    for (int i = 0; i < 100; ++i) {
        const Expr e = testing::random_smooth_expr(s, 4);
        const Point3 p = testing::random_point(s);
        const double xy = at(diff(diff(e, Var::x), Var::y), p);
        const double yx = at(diff(diff(e, Var::y), Var::x), p);
        INFO(to_string(e));
        CHECK(std::fabs(xy - yx) <= 1e-10 * (1 + std::fabs(xy)));
    }
}

TEST_CASE("property: simplify is idempotent and value preserving")
{
    Stream s(9);
    for (int i = 0; i < 200; ++i) {
        const Expr raw = parse(to_string(testing::random_smooth_expr(s, 4)) + " + 0*x + 1*y - y");
        const Expr once = simplify(raw);
        CHECK(structurally_equal(simplify(once), once));
        const Point3 p = testing::random_point(s);
        const double v = at(raw, p);
        CHECK(std::fabs(v - at(once, p)) <= 1e-12 * (1 + std::fabs(v)));
    }
}

TEST_CASE("property: print then parse reproduces the tree")
{
    for (const std::string& src : golden_corpus()) {
        const Expr e = parse(src, xyz_vars | uv_vars | var_bit(Var::t));
        INFO(src << "  ->  " << to_string(e));
        CHECK(structurally_equal(parse(to_string(e), xyz_vars | uv_vars | var_bit(Var::t)), e));
    }
    Stream s(10);
    for (int i = 0; i < 200; ++i) {
        const Expr e = diff(testing::random_smooth_expr(s, 4), Var::y);
        INFO(to_string(e));
        CHECK(structurally_equal(parse(to_string(e)), e));
    }
}

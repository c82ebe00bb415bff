#include "jacobi3/structure.hpp"

#include <cmath>

#include "jacobi3/errors.hpp"

namespace jacobi3 {

namespace {

/// Evaluates `program` at every point in parallel, handing the outputs to `sink`.
template <class Sink>
void for_each_point(const FieldProgram& program, std::span<const Point3> points, Sink&& sink)
{
    detail::parallel_for(points.size(), [&](std::size_t i) {
        thread_local std::vector<double> scratch;
        std::vector<double> out(program.size());
        try {
            program.evaluate(points[i], out, scratch);
        } catch (const EvalDomainError& e) {
            throw EvalDomainError(std::string(e.what()) + " at " + to_string(points[i]));
        }
        sink(i, std::span<const double>(out));
    });
}

} // namespace

std::string_view JacobiStructure::kind_name() const
{
    static constexpr std::string_view names[] = {"rank3", "rank2", "poisson", "custom"};
    return names[kind_.index()];
}

JacobiStructure build_rank3(const VectorField3& a, const SampleDomain& domain, double helicity_tol)
{
    domain.box.validate();
    const ScalarField h = helicity(a);
    const auto points = domain.points();
    const FieldProgram hp{h};
    int sign = 0;
    for (const Point3& p : points) {
        const double v = hp(p).front();
        if (!(std::fabs(v) >= helicity_tol)) throw DegenerateHelicity("helicity A.curl(A) vanishes", p);
        const int s = v > 0 ? 1 : -1;
        if (sign != 0 && s != sign) throw DegenerateHelicity("helicity A.curl(A) changes sign", p);
        sign = s;
    }
    // grad(phi) = grad(h)/h rather than grad(ln h): valid for either sign of h.
    VectorField3 gphi{partial(h, Var::x) / h, partial(h, Var::y) / h, partial(h, Var::z) / h};
    VectorField3 e = curl(a) - cross(gphi, a);
    return {a, std::move(e), Rank3Data{h, std::move(gphi)}, domain};
}

namespace {

void check_mu_psi(const ScalarField& mu, const ScalarField& psi, const SampleDomain& domain, double tol)
{
    domain.box.validate();
    FieldProgram prog;
    prog.add(mu);
    prog.add(grad(psi));
    prog.finalize();
    for (const Point3& p : domain.points()) {
        const auto v = prog(p);
        if (!(std::fabs(v[0]) >= tol)) throw DegenerateInput("mu vanishes", p);
        if (!(vec::norm(vec::at(v, 1)) >= tol)) throw DegenerateInput("grad(psi) vanishes", p);
    }
}

} // namespace

JacobiStructure build_rank2(const ScalarField& mu, const ScalarField& xi1, const ScalarField& xi2, const Expr& psi_hat,
                            const SampleDomain& domain, double tol)
{
    if ((variables(psi_hat) & static_cast<VarSet>(~uv_vars)) != 0) {
        throw std::invalid_argument("psi_hat may only use u, v: " + to_string(psi_hat));
    }
    const ScalarField psi(substitute(substitute(psi_hat, Var::u, xi1.expr()), Var::v, xi2.expr()));
    check_mu_psi(mu, psi, domain, tol);
    const VectorField3 gpsi = grad(psi);
    VectorField3 a = scale(mu, gpsi);
    VectorField3 e = cross(grad(mu), gpsi) - scale(mu, cross(grad(xi1), grad(xi2)));
    return {std::move(a), std::move(e), Rank2Data{mu, xi1, xi2, simplify(psi_hat), psi}, domain};
}

JacobiStructure build_poisson(const ScalarField& mu, const ScalarField& psi, const SampleDomain& domain, double tol)
{
    check_mu_psi(mu, psi, domain, tol);
    return {scale(mu, grad(psi)), VectorField3(0.0, 0.0, 0.0), PoissonData{mu, psi}, domain};
}

JacobiStructure build_custom(const VectorField3& a, const VectorField3& e) { return {a, e, CustomData{}}; }

ScalarField bracket(const JacobiStructure& j, const ScalarField& f, const ScalarField& g)
{
    const VectorField3 gf = grad(f);
    const VectorField3 gg = grad(g);
    return dot(j.A(), cross(gf, gg)) + f * dot(j.E(), gg) - g * dot(j.E(), gf);
}

ResidualReport verify(const JacobiStructure& j, std::span<const Point3> points)
{
    if (points.empty()) throw std::invalid_argument("verify: no points");
    const VectorField3& a = j.A();
    const VectorField3& e = j.E();
    const VectorField3 curl_a = curl(a);
    const ScalarField r1 = dot(a, curl_a - e);
    const VectorField3 r2 = cross(e, curl_a) + scale(div(e), a) - grad(dot(a, e));

    FieldProgram prog;
    const std::size_t i_r1 = prog.add(r1);
    const std::size_t i_r2 = prog.add(r2);
    const std::size_t i_a = prog.add(a);
    const std::size_t i_c = prog.add(curl_a);
    const std::size_t i_e = prog.add(e);
    prog.finalize();

    ResidualReport report;
    report.records.resize(points.size());
    for_each_point(prog, points, [&](std::size_t i, std::span<const double> v) {
        ResidualPoint& rec = report.records[i];
        rec.point = points[i];
        rec.r1 = v[i_r1];
        rec.r2 = vec::at(v, i_r2);
        rec.scale = 1.0 + vec::norm(vec::at(v, i_a)) * (1.0 + vec::norm(vec::at(v, i_c)) + vec::norm(vec::at(v, i_e)));
    });
    SummaryBuilder sb;
    for (const auto& rec : report.records) {
        const double m = std::max({std::fabs(rec.r1), std::fabs(rec.r2[0]), std::fabs(rec.r2[1]), std::fabs(rec.r2[2])});
        sb.add(m, rec.scale);
    }
    report.summary = sb.result();
    return report;
}

Summary jacobi_identity_residual(const JacobiStructure& j, const ScalarField& f, const ScalarField& g,
                                 const ScalarField& h, std::span<const Point3> points)
{
    FieldProgram prog{bracket(j, bracket(j, f, g), h), bracket(j, bracket(j, g, h), f), bracket(j, bracket(j, h, f), g)};
    std::vector<std::pair<double, double>> out(points.size());
    for_each_point(prog, points, [&](std::size_t i, std::span<const double> v) {
        out[i] = {v[0] + v[1] + v[2], 1.0 + std::fabs(v[0]) + std::fabs(v[1]) + std::fabs(v[2])};
    });
    SummaryBuilder sb;
    for (const auto& [r, s] : out) sb.add(r, s);
    return sb.result();
}

Summary first_order_rule_residual(const JacobiStructure& j, const ScalarField& f, const ScalarField& g,
                                  const ScalarField& h, std::span<const Point3> points)
{
    const ScalarField fg = f * g;
    FieldProgram prog{bracket(j, fg, h), f * bracket(j, g, h), bracket(j, f, h) * g, fg * bracket(j, 1.0, h)};
    std::vector<std::pair<double, double>> out(points.size());
    for_each_point(prog, points, [&](std::size_t i, std::span<const double> v) {
        out[i] = {v[0] - v[1] - v[2] + v[3],
                  1.0 + std::fabs(v[0]) + std::fabs(v[1]) + std::fabs(v[2]) + std::fabs(v[3])};
    });
    SummaryBuilder sb;
    for (const auto& [r, s] : out) sb.add(r, s);
    return sb.result();
}

VectorField3 sharp(const JacobiStructure& j, const VectorField3& zeta) { return cross(j.A(), zeta); }

std::string_view to_string(Rank r)
{
    switch (r) {
    case Rank::rank3:
        return "Rank3";
    case Rank::rank2:
        return "Rank2";
    case Rank::degenerate:
        return "Degenerate";
    case Rank::mixed:
        return "Mixed";
    }
    return "?";
}

Rank classify_rank(const JacobiStructure& j, std::span<const Point3> points)
{
    if (points.empty()) throw std::invalid_argument("classify_rank: no points");
    FieldProgram prog;
    const std::size_t i_a = prog.add(j.A());
    const std::size_t i_c = prog.add(curl(j.A()));
    prog.finalize();
    bool all3 = true;
    bool all2 = true;
    std::vector<double> v(prog.size());
    std::vector<double> scratch;
    for (const Point3& p : points) {
        prog.evaluate(p, v, scratch);
        const auto a = vec::at(v, i_a);
        const auto c = vec::at(v, i_c);
        const double na = vec::norm(a);
        if (na <= 1e-10) return Rank::degenerate;
        const double tol = 1e-10 * (1.0 + na * vec::norm(c));
        const double h = vec::dot(a, c);
        if (std::fabs(h) > tol) {
            all2 = false;
        } else {
            all3 = false;
        }
    }
    if (all3) return Rank::rank3;
    if (all2) return Rank::rank2;
    return Rank::mixed;
}

JacobiStructure conformal(const JacobiStructure& j, const ScalarField& lambda)
{
    if (j.domain()) {
        const FieldProgram lp{lambda};
        int sign = 0;
        for (const Point3& p : j.domain()->points()) {
            const double v = lp(p).front();
            if (!(std::fabs(v) >= 1e-10)) throw DegenerateInput("conformal factor vanishes", p);
            const int s = v > 0 ? 1 : -1;
            if (sign != 0 && s != sign) throw DegenerateInput("conformal factor changes sign", p);
            sign = s;
        }
    }
    VectorField3 a = scale(lambda, j.A());
    VectorField3 e = scale(lambda, j.E()) + sharp(j, grad(lambda));
    if (j.as<Rank3Data>()) {
        const ScalarField h = helicity(a);
        VectorField3 gphi{partial(h, Var::x) / h, partial(h, Var::y) / h, partial(h, Var::z) / h};
        return {std::move(a), std::move(e), Rank3Data{h, std::move(gphi)}, j.domain()};
    }
    return {std::move(a), std::move(e), CustomData{}, j.domain()};
}

// ---------------------------------------------------------------------------
// Poissonization

Poissonization::Poissonization(const JacobiStructure& j)
{
    const Expr decay = exp(-Expr::variable(Var::t));
    const auto& a = j.A();
    const auto& e = j.E();
    for (auto& row : pi_) row.fill(Expr(0.0));
    pi_[0][1] = decay * a[2].expr();
    pi_[1][0] = -pi_[0][1];
    pi_[2][0] = decay * a[1].expr();
    pi_[0][2] = -pi_[2][0];
    pi_[1][2] = decay * a[0].expr();
    pi_[2][1] = -pi_[1][2];
    for (std::size_t i = 0; i < 3; ++i) {
        pi_[3][i] = decay * e[i].expr();
        pi_[i][3] = -pi_[3][i];
    }

    static constexpr Var coords[4] = {Var::x, Var::y, Var::z, Var::t};
    std::array<std::array<std::array<Expr, 4>, 4>, 4> d; // d[m][a][b] = d_m Pi^{ab}
    for (std::size_t m = 0; m < 4; ++m) {
        for (std::size_t p = 0; p < 4; ++p) {
            for (std::size_t q = 0; q < 4; ++q) d[m][p][q] = diff(pi_[p][q], coords[m]);
        }
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t jj = i + 1; jj < 4; ++jj) {
            for (std::size_t k = jj + 1; k < 4; ++k) {
                Expr sum;
                for (std::size_t m = 0; m < 4; ++m) {
                    sum = sum + pi_[i][m] * d[m][jj][k] + pi_[jj][m] * d[m][k][i] + pi_[k][m] * d[m][i][jj];
                }
                jacobiator_.push_back(sum);
            }
        }
    }
    // e^{-2t} (1 + |A| + |E|)^2
    const Expr norm_a = sqrt(norm_squared(a).expr());
    const Expr norm_e = sqrt(norm_squared(e).expr());
    magnitude_.push_back(pow(decay * (Expr(1.0) + norm_a + norm_e), Expr(2.0)));
}

double Poissonization::operator()(std::size_t a, std::size_t b, const Point4& p) const
{
    return eval(pi_[a][b], Binding(p.x, p.y, p.z).set(Var::t, p.t));
}

Summary Poissonization::residual(std::span<const Point4> points) const
{
    std::vector<Expr> all = jacobiator_;
    all.insert(all.end(), magnitude_.begin(), magnitude_.end());
    const Program prog(all);
    std::vector<std::pair<double, double>> out(points.size());
    detail::parallel_for(points.size(), [&](std::size_t i) {
        thread_local std::vector<double> scratch;
        std::vector<double> v(prog.output_count());
        const Point4& p = points[i];
        prog.evaluate(Binding(p.x, p.y, p.z).set(Var::t, p.t), v, scratch);
        double m = 0.0;
        for (std::size_t k = 0; k + 1 < v.size(); ++k) m = std::max(m, std::fabs(v[k]));
        out[i] = {m, v.back()};
    });
    SummaryBuilder sb;
    for (const auto& [r, s] : out) sb.add(r, s);
    return sb.result();
}

Poissonization poissonize(const JacobiStructure& j) { return Poissonization(j); }

} // namespace jacobi3

#include "jacobi3/casimir.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "jacobi3/errors.hpp"

namespace jacobi3 {

namespace {

enum PlaneSlot : std::size_t { psi_slot, du_slot, dv_slot, curve_slot, side_slot, plane_slots };

std::string uv_string(double u, double v)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "(u, v) = (%.17g, %.17g)", u, v);
    return buf;
}

} // namespace

CasimirField::CasimirField(const JacobiStructure& j, const Expr& gamma_bar, CasimirOptions options)
    : gamma_bar_(simplify(gamma_bar)), options_(std::move(options))
{
    if (j.as<Rank3Data>()) {
        throw WrongKind("rank3 structures have no nontrivial Casimirs; only rank2 structures do");
    }
    const auto* data = j.as<Rank2Data>();
    if (!data) throw WrongKind("casimir requires a rank2 structure, got " + std::string(j.kind_name()));
    if ((variables(gamma_bar_) & static_cast<VarSet>(~var_bit(Var::u))) != 0) {
        throw std::invalid_argument("gamma_bar may only use u (standing for psi): " + to_string(gamma_bar_));
    }
    for (const Expr* e : {&options_.transversal.curve, &options_.transversal.side}) {
        if ((variables(*e) & static_cast<VarSet>(~uv_vars)) != 0) {
            throw std::invalid_argument("transversal may only use u, v: " + to_string(*e));
        }
    }
    spatial_ = FieldProgram{data->mu, data->xi1, data->xi2};
    const Expr& ph = data->psi_hat;
    plane_ = Program{ph, diff(ph, Var::u), diff(ph, Var::v), options_.transversal.curve, options_.transversal.side};
    gamma_bar_prog_ = Program{gamma_bar_};
}

double CasimirField::psi_hat(double u, double v) const
{
    Binding b;
    b.set(Var::u, u).set(Var::v, v);
    return plane_(b)[psi_slot];
}

std::optional<Characteristic> CasimirField::trace(double u0, double v0, int direction, bool record_path) const
{
    using State = std::array<double, 3>; // u, v, arc length
    std::vector<double> scratch;
    std::array<double, plane_slots> slots{};
    auto eval_plane = [&](double u, double v) {
        Binding b;
        b.set(Var::u, u).set(Var::v, v);
        plane_.evaluate(b, slots, scratch);
    };
    auto rhs = [&](const State& y, State& dy) {
        eval_plane(y[0], y[1]);
        const double speed = std::hypot(slots[du_slot], slots[dv_slot]);
        if (!(speed >= 1e-10)) throw StationaryPsi("grad psi_hat vanishes at " + uv_string(y[0], y[1]), std::nullopt);
        dy = {direction * slots[dv_slot], -direction * slots[du_slot], speed};
    };
    auto curve_at = [&](const State& y) {
        eval_plane(y[0], y[1]);
        return slots[curve_slot];
    };
    auto side_at = [&](const State& y) {
        eval_plane(y[0], y[1]);
        return slots[side_slot];
    };

    Characteristic out;
    out.u0 = u0;
    out.v0 = v0;
    out.direction = direction;
    State y{u0, v0, 0.0};
    State probe{};
    rhs(y, probe); // rejects a stationary start
    if (record_path) out.path.push_back({u0, v0});
    double g_prev = curve_at(y);
    if (g_prev == 0.0 && side_at(y) > 0.0) {
        out.crossing = {u0, v0};
        return out;
    }

    AdaptiveIntegrator<3> integrator(rhs, options_.tolerances);
    double t = 0.0;
    while (y[2] < options_.arc_budget) {
        const State y_prev = y;
        const double t_prev = t;
        t = integrator.step(y, t, std::numeric_limits<double>::max());
        if (record_path) out.path.push_back({y[0], y[1]});
        const double g = curve_at(y);
        if (g_prev != 0.0 && (g == 0.0 || (g < 0.0) != (g_prev < 0.0))) {
            const double h = t - t_prev;
            auto phi = [&](double tau) { return curve_at(integrator.single_step(y_prev, tau)); };
            const double g_end = phi(h);
            double tau_c = h;
            if (g_end != 0.0 && (g_end < 0.0) != (g_prev < 0.0)) {
                std::uintmax_t iterations = 200;
                const auto bracket = boost::math::tools::toms748_solve(
                    phi, 0.0, h, g_prev, g_end, boost::math::tools::eps_tolerance<double>(52), iterations);
                tau_c = 0.5 * (bracket.first + bracket.second);
            }
            const State at = integrator.single_step(y_prev, tau_c);
            if (side_at(at) > 0.0) {
                out.tau = t_prev + tau_c;
                out.arc = at[2];
                out.crossing = {at[0], at[1]};
                return out;
            }
        }
        g_prev = g;
    }
    return std::nullopt;
}

Characteristic CasimirField::characteristic(double u, double v, bool record_path) const
{
    auto forward = trace(u, v, +1, record_path);
    auto backward = trace(u, v, -1, record_path);
    if (forward && backward) return backward->arc < forward->arc ? *backward : *forward;
    if (forward) return *forward;
    if (backward) return *backward;
    throw TransversalMiss("characteristic through " + uv_string(u, v) + " misses the transversal within arc length " +
                              std::to_string(options_.arc_budget),
                          std::nullopt);
}

double CasimirField::gamma(double u, double v) const
{
    const double psi = psi_hat(u, v);
    Binding b;
    b.set(Var::u, psi);
    return gamma_bar_prog_(b).front() + characteristic(u, v).gamma_offset();
}

double CasimirField::operator()(const Point3& p) const
{
    const auto s = spatial_(p);
    try {
        return s[0] * std::exp(gamma(s[1], s[2]));
    } catch (const StationaryPsi& e) {
        throw StationaryPsi(e.what(), p);
    } catch (const TransversalMiss& e) {
        throw TransversalMiss(e.what(), p);
    }
}

CasimirField casimir(const JacobiStructure& j, const Expr& gamma_bar, CasimirOptions options)
{
    return CasimirField(j, gamma_bar, std::move(options));
}

std::array<double, 3> casimir_gradient(const CasimirField& c, const Point3& p, double h)
{
    std::array<double, 3> g{};
    for (int k = 0; k < 3; ++k) {
        Point3 lo = p;
        Point3 hi = p;
        (k == 0 ? lo.x : k == 1 ? lo.y : lo.z) -= h;
        (k == 0 ? hi.x : k == 1 ? hi.y : hi.z) += h;
        g[k] = (c(hi) - c(lo)) / (2 * h);
    }
    return g;
}

CasimirReport casimir_residual(const JacobiStructure& j, const CasimirField& c, std::span<const Point3> points,
                               double h)
{
    FieldProgram prog;
    const std::size_t i_a = prog.add(j.A());
    const std::size_t i_e = prog.add(j.E());
    prog.finalize();
    std::vector<std::pair<double, double>> rows(points.size());
    detail::parallel_for(
        points.size(),
        [&](std::size_t k) {
            const auto v = prog(points[k]);
            const auto a = vec::at(v, i_a);
            const auto e = vec::at(v, i_e);
            const double cv = c(points[k]);
            const auto gc = casimir_gradient(c, points[k], h);
            const auto gxa = vec::cross(gc, a);
            const std::array<double, 3> diff{gxa[0] - cv * e[0], gxa[1] - cv * e[1], gxa[2] - cv * e[2]};
            rows[k] = {vec::norm(diff) / std::fabs(cv), vec::dot(e, gc) / std::fabs(cv)};
        },
        4);
    SummaryBuilder cross, transport;
    for (const auto& [x, t] : rows) {
        cross.add(x);
        transport.add(t);
    }
    return {cross.result(), transport.result()};
}

Summary casimir_bracket_residual(const JacobiStructure& j, const CasimirField& c, const ScalarField& f,
                                 std::span<const Point3> points, double h)
{
    FieldProgram prog;
    const std::size_t i_a = prog.add(j.A());
    const std::size_t i_e = prog.add(j.E());
    const std::size_t i_f = prog.add(f);
    const std::size_t i_gf = prog.add(grad(f));
    prog.finalize();
    std::vector<std::pair<double, double>> rows(points.size());
    detail::parallel_for(
        points.size(),
        [&](std::size_t k) {
            const auto v = prog(points[k]);
            const auto a = vec::at(v, i_a);
            const auto e = vec::at(v, i_e);
            const auto gf = vec::at(v, i_gf);
            const double fv = v[i_f];
            const double cv = c(points[k]);
            const auto gc = casimir_gradient(c, points[k], h);
            const double br = vec::dot(a, vec::cross(gf, gc)) + fv * vec::dot(e, gc) - cv * vec::dot(e, gf);
            rows[k] = {br, std::fabs(cv) * (1.0 + std::fabs(fv) + vec::norm(gf))};
        },
        4);
    SummaryBuilder sb;
    for (const auto& [r, s] : rows) sb.add(r / s);
    return sb.result();
}

} // namespace jacobi3

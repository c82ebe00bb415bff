#include "jacobi3/hamflow.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "jacobi3/errors.hpp"

namespace jacobi3 {

namespace {

const ScalarField* psi_of(const JacobiStructure& j)
{
    if (const auto* d = j.as<Rank2Data>()) return &d->psi;
    if (const auto* d = j.as<PoissonData>()) return &d->psi;
    return nullptr;
}

void append_number(std::string& line, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    line += buf;
}

} // namespace

VectorField3 hamiltonian_field(const JacobiStructure& j, const ScalarField& h)
{
    return cross(j.A(), grad(h)) + scale(h, j.E());
}

Trajectory integrate(const JacobiStructure& j, const ScalarField& h, const Point3& x0, double t_end,
                     const FlowControls& controls)
{
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("integrate: t_end must be positive");
    if (controls.outputs == 0) throw std::invalid_argument("integrate: at least one output interval is required");
    if (!x0.finite()) throw std::invalid_argument("integrate: initial state is not finite");

    const VectorField3 v = hamiltonian_field(j, h);
    const FieldProgram velocity{v[0], v[1], v[2]};
    FieldProgram monitor;
    const std::size_t i_h = monitor.add(h);
    const std::size_t i_div = monitor.add(div(v));
    const ScalarField* psi = psi_of(j);
    const std::size_t i_psi = psi ? monitor.add(*psi) : 0;
    monitor.finalize();

    Trajectory tr;
    if (psi) tr.monitors.psi.emplace();
    if (controls.casimir) tr.monitors.casimir.emplace();
    std::vector<double> scratch;
    std::vector<double> values(monitor.size());
    auto record = [&](double t, const Point3& p) {
        tr.times.push_back(t);
        tr.states.push_back(p);
        monitor.evaluate(p, values, scratch);
        tr.monitors.H.push_back(values[i_h]);
        tr.monitors.div_vH.push_back(values[i_div]);
        if (psi) tr.monitors.psi->push_back(values[i_psi]);
        if (controls.casimir) tr.monitors.casimir->push_back((*controls.casimir)(p));
    };

    using State = std::array<double, 3>;
    std::vector<double> rhs_scratch;
    std::array<double, 3> out{};
    AdaptiveIntegrator<3> integrator(
        [&](const State& y, State& dy) {
            velocity.evaluate(Point3{y[0], y[1], y[2]}, out, rhs_scratch);
            dy = out;
        },
        controls.tolerances);

    State y{x0.x, x0.y, x0.z};
    double t = 0.0;
    record(0.0, x0);
    for (std::size_t k = 1; k <= controls.outputs; ++k) {
        const double target = t_end * static_cast<double>(k) / static_cast<double>(controls.outputs);
        while (t < target) t = integrator.step(y, t, target);
        record(target, Point3{y[0], y[1], y[2]});
    }
    return tr;
}

std::vector<Trajectory> integrate_ensemble(const JacobiStructure& j, const ScalarField& h,
                                           std::span<const Point3> starts, double t_end, const FlowControls& controls)
{
    std::vector<Trajectory> out(starts.size());
    detail::parallel_for(
        starts.size(), [&](std::size_t i) { out[i] = integrate(j, h, starts[i], t_end, controls); }, 1);
    return out;
}

void write_csv(std::ostream& out, const Trajectory& tr)
{
    out << "t,x,y,z,psi,casimir,H,div_vH\n";
    std::string line;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        line.clear();
        for (double v : {tr.times[k], tr.states[k].x, tr.states[k].y, tr.states[k].z}) {
            append_number(line, v);
            line += ',';
        }
        if (tr.monitors.psi) append_number(line, (*tr.monitors.psi)[k]);
        line += ',';
        if (tr.monitors.casimir) append_number(line, (*tr.monitors.casimir)[k]);
        line += ',';
        append_number(line, tr.monitors.H[k]);
        line += ',';
        append_number(line, tr.monitors.div_vH[k]);
        line += '\n';
        out << line;
    }
}

std::vector<Drift> conservation_report(const Trajectory& tr, std::span<const std::string> quantities)
{
    if (tr.size() == 0) throw std::invalid_argument("conservation_report: empty trajectory");
    std::vector<Drift> out;
    for (const std::string& q : quantities) {
        const std::vector<double>* series = nullptr;
        if (q == "H") {
            series = &tr.monitors.H;
        } else if (q == "psi" && tr.monitors.psi) {
            series = &*tr.monitors.psi;
        } else if (q == "casimir" && tr.monitors.casimir) {
            series = &*tr.monitors.casimir;
        }
        if (!series) throw std::invalid_argument("trajectory has no '" + q + "' monitor");
        const double q0 = series->front();
        double drift = 0.0;
        for (double v : *series) drift = std::max(drift, std::fabs(v - q0) / (1.0 + std::fabs(q0)));
        out.push_back({q, drift});
    }
    return out;
}

BalanceReport h_balance_check(const JacobiStructure& j, const ScalarField& h, const Trajectory& tr)
{
    const std::size_t n = tr.size();
    if (n < 3 || (n - 1) % 2 != 0) throw std::invalid_argument("h_balance_check: needs an even number of intervals");
    const double dt = tr.times[1] - tr.times[0];
    for (std::size_t k = 1; k < n; ++k) {
        if (std::fabs(tr.times[k] - tr.times[k - 1] - dt) > 1e-9 * std::max(1.0, std::fabs(dt))) {
            throw std::invalid_argument("h_balance_check: output times must be equally spaced");
        }
    }
    const FieldProgram rate{h * dot(j.E(), grad(h))};
    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = rate(tr.states[k]).front();

    BalanceReport r;
    double integral = 0.0;
    const double h0 = tr.monitors.H.front();
    for (std::size_t k = 2; k < n; k += 2) {
        integral += dt / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
        const double change = tr.monitors.H[k] - h0;
        r.max_discrepancy = std::max(r.max_discrepancy, std::fabs(change - integral));
        r.max_change = std::max(r.max_change, std::fabs(change));
    }
    return r;
}

ScalarField divergence_formula(const JacobiStructure& j, const ScalarField& h)
{
    const VectorField3 gh = grad(h);
    if (const auto* d = j.as<Rank3Data>()) {
        return dot(d->grad_phi, curl(scale(h, j.A()))) + ScalarField(2.0) * dot(gh, curl(j.A()));
    }
    if (const auto* d = j.as<Rank2Data>()) {
        return ScalarField(2.0) * dot(gh, cross(grad(d->mu), grad(d->psi))) -
               dot(grad(d->mu * h), cross(grad(d->xi1), grad(d->xi2)));
    }
    if (const auto* d = j.as<PoissonData>()) return dot(gh, cross(grad(d->mu), grad(d->psi)));
    throw WrongKind("divergence_check has no closed form for custom structures");
}

Summary divergence_check(const JacobiStructure& j, const ScalarField& h, std::span<const Point3> points)
{
    const FieldProgram prog{div(hamiltonian_field(j, h)), divergence_formula(j, h)};
    std::vector<std::pair<double, double>> rows(points.size());
    detail::parallel_for(points.size(), [&](std::size_t k) {
        const auto v = prog(points[k]);
        rows[k] = {v[0] - v[1], 1.0 + std::fabs(v[1])};
    });
    SummaryBuilder sb;
    for (const auto& [r, s] : rows) sb.add(r, s);
    return sb.result();
}

Summary lie_homomorphism_residual(const JacobiStructure& j, const ScalarField& f, const ScalarField& g,
                                  std::span<const Point3> points)
{
    const VectorField3 vf = hamiltonian_field(j, f);
    const VectorField3 vg = hamiltonian_field(j, g);
    const VectorField3 vfg = hamiltonian_field(j, bracket(j, f, g));
    FieldProgram prog;
    const std::size_t i_fg = prog.add(vfg);
    std::array<std::size_t, 3> i_ab{};
    std::array<std::size_t, 3> i_ba{};
    for (std::size_t i = 0; i < 3; ++i) {
        i_ab[i] = prog.add(dot(vf, grad(vg[i])));
        i_ba[i] = prog.add(dot(vg, grad(vf[i])));
    }
    prog.finalize();
    std::vector<std::pair<double, double>> rows(points.size());
    detail::parallel_for(points.size(), [&](std::size_t k) {
        const auto v = prog(points[k]);
        double worst = 0.0;
        double magnitude = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            worst = std::max(worst, std::fabs(v[i_fg + i] - (v[i_ab[i]] - v[i_ba[i]])));
            magnitude = std::max(magnitude, std::fabs(v[i_fg + i]) + std::fabs(v[i_ab[i]]) + std::fabs(v[i_ba[i]]));
        }
        rows[k] = {worst, 1.0 + magnitude};
    });
    SummaryBuilder sb;
    for (const auto& [r, s] : rows) sb.add(r, s);
    return sb.result();
}

VectorField3 abc_field(double a, double b, double c)
{
    if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) throw std::invalid_argument("ABC parameters must be non-negative");
    const Expr x = Expr::variable(Var::x);
    const Expr y = Expr::variable(Var::y);
    const Expr z = Expr::variable(Var::z);
    return {ScalarField(Expr(a) * sin(z) + Expr(c) * cos(y)), ScalarField(Expr(b) * sin(x) + Expr(a) * cos(z)),
            ScalarField(Expr(c) * sin(y) + Expr(b) * cos(x))};
}

Summary force_free_residual(const VectorField3& a, const ScalarField& lambda, std::span<const Point3> points)
{
    const VectorField3 r = curl(a) - scale(lambda, a);
    const FieldProgram prog{r[0], r[1], r[2]};
    SummaryBuilder sb;
    for (const Point3& p : points) {
        const auto v = prog(p);
        sb.add(std::max({std::fabs(v[0]), std::fabs(v[1]), std::fabs(v[2])}));
    }
    return sb.result();
}

} // namespace jacobi3

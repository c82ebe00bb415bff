#include "jacobi3/contact.hpp"

#include <cmath>

#include "jacobi3/errors.hpp"

namespace jacobi3 {

ContactForm contact_form(const JacobiStructure& j)
{
    const auto* data = j.as<Rank3Data>();
    if (!data) throw WrongKind("contact form requires a rank3 structure, got " + std::string(j.kind_name()));
    const ScalarField& h = data->helicity;
    const VectorField3& a = j.A();
    return {VectorField3{a[0] / h, a[1] / h, a[2] / h}, h};
}

ScalarField contact_volume(const ContactForm& form) { return dot(form.theta, curl(form.theta)); }

std::array<std::array<ScalarField, 3>, 3> exterior_derivative(const ContactForm& form)
{
    static constexpr Var coords[3] = {Var::x, Var::y, Var::z};
    std::array<std::array<ScalarField, 3>, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            out[i][k] = partial(form.theta[k], coords[i]) - partial(form.theta[i], coords[k]);
        }
    }
    return out;
}

ContactReport contact_identities(const JacobiStructure& j, std::span<const Point3> points)
{
    const ContactForm form = contact_form(j);
    FieldProgram prog;
    const std::size_t i_theta = prog.add(form.theta);
    const std::size_t i_vol = prog.add(contact_volume(form));
    const std::size_t i_h = prog.add(form.helicity);
    const std::size_t i_a = prog.add(j.A());
    const std::size_t i_e = prog.add(j.E());
    prog.finalize();

    struct Row {
        double reeb, volume, annihilation, annihilation_scale, coupling, coupling_scale;
    };
    std::vector<Row> rows(points.size());
    detail::parallel_for(points.size(), [&](std::size_t k) {
        thread_local std::vector<double> scratch;
        std::vector<double> v(prog.size());
        prog.evaluate(points[k], v, scratch);
        const auto theta = vec::at(v, i_theta);
        const auto a = vec::at(v, i_a);
        const auto e = vec::at(v, i_e);
        const double h = v[i_h];
        rows[k] = {vec::dot(e, theta) - 1.0,
                   (v[i_vol] - 1.0 / h) * std::fabs(h),
                   vec::norm(vec::cross(a, theta)),
                   1.0 + vec::norm(a) * vec::norm(theta),
                   vec::dot(a, e) - h,
                   1.0 + std::fabs(h)};
    });
    SummaryBuilder reeb, volume, annihilation, coupling;
    for (const Row& r : rows) {
        reeb.add(r.reeb);
        volume.add(r.volume);
        annihilation.add(r.annihilation, r.annihilation_scale);
        coupling.add(r.coupling, r.coupling_scale);
    }
    return {reeb.result(), volume.result(), annihilation.result(), coupling.result()};
}

} // namespace jacobi3

#include "jacobi3/sampling.hpp"

#include <stdexcept>

namespace jacobi3 {

namespace {
constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

double lerp(double lo, double hi, double u) { return lo + (hi - lo) * u; }
} // namespace

std::uint64_t splitmix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t counter)
{
    const std::uint64_t bits = splitmix64(seed + (counter + 1) * golden_gamma);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

void Box::validate() const
{
    if (!(min.x < max.x && min.y < max.y && min.z < max.z)) {
        throw std::invalid_argument("box requires min < max componentwise");
    }
}

bool Box::contains(const Point3& p) const
{
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
}

Point3 Box::center() const { return {(min.x + max.x) / 2, (min.y + max.y) / 2, (min.z + max.z) / 2}; }

std::vector<Point3> SampleDomain::points() const { return sample_box(box, samples, seed); }

std::vector<Point3> sample_box(const Box& box, std::size_t count, std::uint64_t seed)
{
    std::vector<Point3> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t k = 3 * static_cast<std::uint64_t>(i);
        out.push_back({lerp(box.min.x, box.max.x, uniform01(seed, k)), lerp(box.min.y, box.max.y, uniform01(seed, k + 1)),
                       lerp(box.min.z, box.max.z, uniform01(seed, k + 2))});
    }
    return out;
}

std::vector<Point3> box_lattice(const Box& box)
{
    std::vector<Point3> out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                out.push_back({lerp(box.min.x, box.max.x, i / 2.0), lerp(box.min.y, box.max.y, j / 2.0),
                               lerp(box.min.z, box.max.z, k / 2.0)});
            }
        }
    }
    return out;
}

std::vector<Point4> sample_box4(const Box& box, double t_min, double t_max, std::size_t count, std::uint64_t seed)
{
    std::vector<Point4> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t k = 4 * static_cast<std::uint64_t>(i);
        out.push_back({lerp(box.min.x, box.max.x, uniform01(seed, k)), lerp(box.min.y, box.max.y, uniform01(seed, k + 1)),
                       lerp(box.min.z, box.max.z, uniform01(seed, k + 2)), lerp(t_min, t_max, uniform01(seed, k + 3))});
    }
    return out;
}

ScalarField random_polynomial(std::uint64_t seed, int degree, double coeff)
{
    const Expr x = Expr::variable(Var::x);
    const Expr y = Expr::variable(Var::y);
    const Expr z = Expr::variable(Var::z);
    auto power = [](const Expr& base, int n) { return pow(base, Expr(static_cast<double>(n))); };
    Expr sum;
    std::uint64_t counter = 0;
    for (int total = 0; total <= degree; ++total) {
        for (int a = total; a >= 0; --a) {
            for (int b = total - a; b >= 0; --b) {
                const int c = total - a - b;
                const double k = lerp(-coeff, coeff, uniform01(seed, counter++));
                sum = sum + Expr(k) * (power(x, a) * power(y, b) * power(z, c));
            }
        }
    }
    return ScalarField(sum);
}

} // namespace jacobi3

#pragma once

// Deterministic sampling of axis-aligned boxes and seeded random test fields.
//
// The generator is counter based so that point sets can be reproduced in any
// language: uniform(seed, k) = (splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15) >> 11) * 2^-53,
// and coordinate d of point i uses counter k = 3 i + d.

#include <cstdint>
#include <vector>

#include "jacobi3/field.hpp"
#include "jacobi3/point.hpp"

namespace jacobi3 {

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t z);
/// Uniform double in [0, 1) for the given stream position.
[[nodiscard]] double uniform01(std::uint64_t seed, std::uint64_t counter);

struct Box {
    Point3 min;
    Point3 max;

    /// Throws std::invalid_argument unless min < max componentwise.
    void validate() const;
    [[nodiscard]] bool contains(const Point3& p) const;
    [[nodiscard]] Point3 center() const;
};

struct SampleDomain {
    Box box;
    std::size_t samples = 1000;
    std::uint64_t seed = 0;

    [[nodiscard]] std::vector<Point3> points() const;
};

[[nodiscard]] std::vector<Point3> sample_box(const Box& box, std::size_t count, std::uint64_t seed);
/// The 3x3x3 lattice of corners, edge and face midpoints and the centre.
[[nodiscard]] std::vector<Point3> box_lattice(const Box& box);
[[nodiscard]] std::vector<Point4> sample_box4(const Box& box, double t_min, double t_max, std::size_t count,
                                              std::uint64_t seed);

/// Sum of c * x^a y^b z^c over a + b + c <= degree with c uniform in [-coeff, coeff].
[[nodiscard]] ScalarField random_polynomial(std::uint64_t seed, int degree, double coeff = 1.0);

} // namespace jacobi3

#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

namespace jacobi3 {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    [[nodiscard]] bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
    [[nodiscard]] std::array<double, 3> array() const { return {x, y, z}; }

    friend bool operator==(const Point3&, const Point3&) = default;
};

/// A point of R^3 x R, the carrier of the Poissonization.
struct Point4 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double t = 0.0;
};

inline std::string to_string(const Point3& p)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g)", p.x, p.y, p.z);
    return buf;
}

} // namespace jacobi3

#pragma once

// The contact 1-form theta = A / (A . curl A) of a rank-3 structure.

#include <array>
#include <span>

#include "jacobi3/structure.hpp"

namespace jacobi3 {

struct ContactForm {
    VectorField3 theta;   ///< coefficients theta_i of theta = theta_i dx^i
    ScalarField helicity; ///< h = A . curl A, so theta = e^{-phi} A with e^{phi} = h
};

/// Throws WrongKind unless j was built as a rank-3 structure.
[[nodiscard]] ContactForm contact_form(const JacobiStructure& j);

/// Coefficient of theta ^ d theta against dx ^ dy ^ dz, i.e. theta . curl theta.
[[nodiscard]] ScalarField contact_volume(const ContactForm& form);

/// (d theta)_{ij} = d_i theta_j - d_j theta_i.
[[nodiscard]] std::array<std::array<ScalarField, 3>, 3> exterior_derivative(const ContactForm& form);

struct ContactReport {
    Summary reeb;         ///< |i_E theta - 1|
    Summary volume;       ///< |theta . curl theta - 1/h| * |h|
    Summary annihilation; ///< |i_theta Lambda| = |A x theta|, scaled by 1 + |A||theta|
    Summary coupling;     ///< |A . E - h|, scaled by 1 + |h|

    [[nodiscard]] bool passes(double tol) const
    {
        return reeb.max_abs <= tol && volume.max_abs <= tol && annihilation.max_scaled <= tol &&
               coupling.max_scaled <= tol;
    }
};

[[nodiscard]] ContactReport contact_identities(const JacobiStructure& j, std::span<const Point3> points);

} // namespace jacobi3

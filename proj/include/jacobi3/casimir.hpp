#pragma once

// Casimir functions of rank-2 structures by the method of characteristics.
//
// With A = mu grad psi and psi = psi_hat(xi1, xi2), a Casimir has the form
// C = mu e^Gamma where Gamma(u, v) solves
//   d_u Gamma d_v psi_hat - d_v Gamma d_u psi_hat = -1
// in the (u, v) = (xi1, xi2) plane. Along the characteristics
//   du/ds = d_v psi_hat,  dv/ds = -d_u psi_hat,  dGamma/ds = -1
// psi_hat is constant, and Gamma = gamma_bar(psi) on a transversal curve.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "jacobi3/ode.hpp"
#include "jacobi3/structure.hpp"

namespace jacobi3 {

/// The curve {curve(u, v) = 0, side(u, v) > 0} where Gamma = gamma_bar(psi).
struct Transversal {
    Expr curve = Expr::variable(Var::v);
    Expr side = Expr::variable(Var::u);
};

struct CasimirOptions {
    Transversal transversal;
    /// Budget on the Euclidean arc length of a characteristic in the (u, v) plane.
    double arc_budget = 100.0;
    Tolerances tolerances{1e-10, 1e-12, 0.05, 1e-3};
};

/// Where the characteristic through (u0, v0) meets the transversal.
struct Characteristic {
    double u0 = 0.0;
    double v0 = 0.0;
    int direction = 1;   ///< +1 along (d_v psi_hat, -d_u psi_hat), -1 against it
    double tau = 0.0;    ///< parameter length to the crossing
    double arc = 0.0;    ///< Euclidean arc length to the crossing
    std::array<double, 2> crossing{};
    std::vector<std::array<double, 2>> path; ///< accepted states, when requested

    /// Gamma(u0, v0) - gamma_bar(psi)
    [[nodiscard]] double gamma_offset() const { return direction * tau; }
};

class CasimirField {
public:
    /// Throws WrongKind for anything but a rank-2 structure; rank-3 input has
    /// no nontrivial Casimirs. gamma_bar is an expression in u, read as psi.
    CasimirField(const JacobiStructure& j, const Expr& gamma_bar, CasimirOptions options = {});

    /// C(p) = mu(p) exp(Gamma(xi1(p), xi2(p))). Throws StationaryPsi where
    /// grad psi_hat vanishes along the path, TransversalMiss when neither
    /// direction reaches the transversal within the arc budget.
    [[nodiscard]] double operator()(const Point3& p) const;

    /// Gamma in the (u, v) plane.
    [[nodiscard]] double gamma(double u, double v) const;

    /// Both directions are integrated; the shorter arc wins, which fixes the branch.
    [[nodiscard]] Characteristic characteristic(double u, double v, bool record_path = false) const;

    [[nodiscard]] double psi_hat(double u, double v) const;
    [[nodiscard]] const Expr& gamma_bar() const { return gamma_bar_; }
    [[nodiscard]] const CasimirOptions& options() const { return options_; }

private:
    [[nodiscard]] std::optional<Characteristic> trace(double u, double v, int direction, bool record_path) const;

    Expr gamma_bar_;
    CasimirOptions options_;
    FieldProgram spatial_;   ///< mu, xi1, xi2
    Program plane_;          ///< psi_hat, d_u psi_hat, d_v psi_hat, curve, side
    Program gamma_bar_prog_; ///< gamma_bar(u)
};

[[nodiscard]] CasimirField casimir(const JacobiStructure& j, const Expr& gamma_bar, CasimirOptions options = {});

struct CasimirReport {
    Summary cross;     ///< |grad C x A - C E| / |C|
    Summary transport; ///< |E . grad C| / |C|
};

/// grad C by central differences of step `h`.
[[nodiscard]] std::array<double, 3> casimir_gradient(const CasimirField& c, const Point3& p, double h = 1e-5);

[[nodiscard]] CasimirReport casimir_residual(const JacobiStructure& j, const CasimirField& c,
                                             std::span<const Point3> points, double h = 1e-5);

/// |{f, C}| / (|C| (1 + |f| + |grad f|)) with grad C by central differences.
[[nodiscard]] Summary casimir_bracket_residual(const JacobiStructure& j, const CasimirField& c, const ScalarField& f,
                                               std::span<const Point3> points, double h = 1e-5);

} // namespace jacobi3

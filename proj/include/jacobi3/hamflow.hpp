#pragma once

// Hamiltonian vector fields v_H = A x grad H + H E, their flows with
// conservation monitors, and the divergence and force-free diagnostics.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jacobi3/casimir.hpp"
#include "jacobi3/ode.hpp"
#include "jacobi3/structure.hpp"

namespace jacobi3 {

/// v_H = Lambda#(dH) + H E = A x grad H + H E; v_1 = E.
[[nodiscard]] VectorField3 hamiltonian_field(const JacobiStructure& j, const ScalarField& h);

struct Monitors {
    std::optional<std::vector<double>> psi;     ///< rank2 and poisson structures
    std::optional<std::vector<double>> casimir; ///< when a Casimir is supplied
    std::vector<double> H;
    std::vector<double> div_vH;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Point3> states;
    Monitors monitors;

    [[nodiscard]] std::size_t size() const { return times.size(); }
};

struct FlowControls {
    /// Output times are k t_end / outputs for k = 0..outputs, hit exactly.
    std::size_t outputs = 100;
    Tolerances tolerances{1e-10, 1e-12, 1e300, 1e-3};
    std::optional<CasimirField> casimir;
};

/// Adaptive Dormand-Prince integration of dx/dt = v_H(x) on [0, t_end].
/// Throws StepFailure on step underflow; EvalDomainError propagates.
[[nodiscard]] Trajectory integrate(const JacobiStructure& j, const ScalarField& h, const Point3& x0, double t_end,
                                   const FlowControls& controls = {});

/// Independent trajectories integrated concurrently, in input order.
[[nodiscard]] std::vector<Trajectory> integrate_ensemble(const JacobiStructure& j, const ScalarField& h,
                                                         std::span<const Point3> starts, double t_end,
                                                         const FlowControls& controls = {});

/// Columns t,x,y,z,psi,casimir,H,div_vH with 17 significant digits; a
/// monitor that does not apply leaves its column empty.
void write_csv(std::ostream& out, const Trajectory& tr);

struct Drift {
    std::string quantity;
    double max_drift = 0.0; ///< max |q(t) - q(0)| / (1 + |q(0)|)
};

/// quantities name monitors: "psi", "casimir" or "H". Throws
/// std::invalid_argument for a monitor the trajectory does not carry.
[[nodiscard]] std::vector<Drift> conservation_report(const Trajectory& tr, std::span<const std::string> quantities);

struct BalanceReport {
    double max_discrepancy = 0.0; ///< max_k |H(t_2k) - H(0) - int_0^{t_2k} H E(H) dt|
    double max_change = 0.0;      ///< max_k |H(t_2k) - H(0)|
};

/// Checks dH/dt = H E(H) along a trajectory: the measured change of H is
/// compared with composite Simpson quadrature of H E(H) over the output
/// samples (an even number of equal intervals is required).
[[nodiscard]] BalanceReport h_balance_check(const JacobiStructure& j, const ScalarField& h, const Trajectory& tr);

/// div v_H computed directly against the closed form for the structure kind:
///   rank3:   grad phi . curl(H A) + 2 grad H . curl A
///   rank2:   2 grad H . (grad mu x grad psi) - grad(mu H) . (grad xi1 x grad xi2)
///   poisson: grad H . (grad mu x grad psi)
/// Throws WrongKind for custom structures.
[[nodiscard]] Summary divergence_check(const JacobiStructure& j, const ScalarField& h, std::span<const Point3> points);

/// The closed form used by divergence_check.
[[nodiscard]] ScalarField divergence_formula(const JacobiStructure& j, const ScalarField& h);

/// max_i |v_{f,g}^i - [v_f, v_g]^i| with [X, Y]^i = X . grad Y^i - Y . grad X^i,
/// scaled by 1 + the magnitude of the terms.
[[nodiscard]] Summary lie_homomorphism_residual(const JacobiStructure& j, const ScalarField& f, const ScalarField& g,
                                                std::span<const Point3> points);

/// (a sin z + c cos y, b sin x + a cos z, c sin y + b cos x); requires a, b, c >= 0.
[[nodiscard]] VectorField3 abc_field(double a, double b, double c);

/// max_i |(curl A - lambda A)^i|.
[[nodiscard]] Summary force_free_residual(const VectorField3& a, const ScalarField& lambda,
                                          std::span<const Point3> points);

} // namespace jacobi3

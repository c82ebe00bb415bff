#pragma once

// Jacobi structures (Lambda, E) on R^3, with Lambda^{ij} = eps_{ijk} A^k.
//
// A pair (A, E) is a Jacobi structure iff
//   r1 = A . (curl A - E)                                 = 0
//   r2 = E x curl A + A div E - grad(A . E)               = 0
// Two families solve these away from A = 0:
//   rank 3 (A . curl A != 0):  E = curl A - grad(phi) x A,  grad(phi) = grad(h)/h,  h = A . curl A
//   rank 2 (A = mu grad psi):  E = grad mu x grad psi - mu grad xi1 x grad xi2,  psi = psi_hat(xi1, xi2)
// with the Poisson case E = 0 as a special rank-2 structure.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "jacobi3/field.hpp"
#include "jacobi3/sampling.hpp"
#include "jacobi3/summary.hpp"

namespace jacobi3 {

struct Rank3Data {
    ScalarField helicity;  ///< h = A . curl A; phi = ln h
    VectorField3 grad_phi; ///< grad(h) / h
};

struct Rank2Data {
    ScalarField mu;
    ScalarField xi1;
    ScalarField xi2;
    Expr psi_hat; ///< over {u, v}
    ScalarField psi;
};

struct PoissonData {
    ScalarField mu;
    ScalarField psi;
};

struct CustomData {};

using StructureKind = std::variant<Rank3Data, Rank2Data, PoissonData, CustomData>;

class JacobiStructure {
public:
    JacobiStructure(VectorField3 a, VectorField3 e, StructureKind kind, std::optional<SampleDomain> domain = {})
        : a_(std::move(a)), e_(std::move(e)), kind_(std::move(kind)), domain_(std::move(domain))
    {
    }

    [[nodiscard]] const VectorField3& A() const { return a_; }
    [[nodiscard]] const VectorField3& E() const { return e_; }
    [[nodiscard]] const StructureKind& kind() const { return kind_; }
    [[nodiscard]] const std::optional<SampleDomain>& domain() const { return domain_; }
    [[nodiscard]] std::string_view kind_name() const;

    template <class T>
    [[nodiscard]] const T* as() const
    {
        return std::get_if<T>(&kind_);
    }

private:
    VectorField3 a_;
    VectorField3 e_;
    StructureKind kind_;
    std::optional<SampleDomain> domain_;
};

/// Throws DegenerateHelicity if |A . curl A| < helicity_tol at a domain sample
/// or if the helicity changes sign across samples.
[[nodiscard]] JacobiStructure build_rank3(const VectorField3& a, const SampleDomain& domain, double helicity_tol = 1e-10);

/// psi_hat is an expression in u, v; psi = psi_hat(xi1, xi2). Throws
/// DegenerateInput if mu or |grad psi| vanishes (below `tol`) at a sample.
[[nodiscard]] JacobiStructure build_rank2(const ScalarField& mu, const ScalarField& xi1, const ScalarField& xi2,
                                          const Expr& psi_hat, const SampleDomain& domain, double tol = 1e-10);

[[nodiscard]] JacobiStructure build_poisson(const ScalarField& mu, const ScalarField& psi, const SampleDomain& domain,
                                            double tol = 1e-10);

/// Stores the fields verbatim; no validity claim until verify().
[[nodiscard]] JacobiStructure build_custom(const VectorField3& a, const VectorField3& e);

/// {f, g} = A . (grad f x grad g) + f E(g) - g E(f)
[[nodiscard]] ScalarField bracket(const JacobiStructure& j, const ScalarField& f, const ScalarField& g);

struct ResidualPoint {
    Point3 point;
    double r1 = 0.0;
    std::array<double, 3> r2{};
    double scale = 1.0; ///< 1 + |A| (1 + |curl A| + |E|)
};

struct ResidualReport {
    std::vector<ResidualPoint> records;
    /// Over max(|r1|, |r2|_inf) per point.
    Summary summary;

    [[nodiscard]] bool passes(double tol) const { return summary.max_scaled <= tol; }
};

/// Evaluates the Jacobi-equation residuals at every point. Records are in
/// point order. EvalDomainError is rethrown with the offending point.
[[nodiscard]] ResidualReport verify(const JacobiStructure& j, std::span<const Point3> points);

/// |{{f,g},h} + {{g,h},f} + {{h,f},g}|, scaled by 1 + sum of the term magnitudes.
[[nodiscard]] Summary jacobi_identity_residual(const JacobiStructure& j, const ScalarField& f, const ScalarField& g,
                                               const ScalarField& h, std::span<const Point3> points);

/// |{fg,h} - f{g,h} - {f,h}g + fg{1,h}|; vanishes for any (A, E).
[[nodiscard]] Summary first_order_rule_residual(const JacobiStructure& j, const ScalarField& f, const ScalarField& g,
                                                const ScalarField& h, std::span<const Point3> points);

/// Lambda#(zeta)^j = Lambda^{ij} zeta_i = (A x zeta)^j.
[[nodiscard]] VectorField3 sharp(const JacobiStructure& j, const VectorField3& zeta);

enum class Rank { rank3, rank2, degenerate, mixed };
[[nodiscard]] std::string_view to_string(Rank r);

/// Rank3 if |h| > tol everywhere, Rank2 if |h| <= tol and A != 0 everywhere,
/// Degenerate if A = 0 somewhere, Mixed otherwise; tol = 1e-10 (1 + |A||curl A|).
[[nodiscard]] Rank classify_rank(const JacobiStructure& j, std::span<const Point3> points);

/// (lambda A, lambda E + A x grad lambda). Throws DegenerateInput if lambda
/// vanishes or changes sign across the samples of the structure's domain.
[[nodiscard]] JacobiStructure conformal(const JacobiStructure& j, const ScalarField& lambda);

/// The Poisson bivector Pi = e^{-t} (Lambda + d/dt ^ E) on R^3 x R.
class Poissonization {
public:
    explicit Poissonization(const JacobiStructure& j);

    /// Pi^{ab}, a, b in 0..3 with index 3 the t direction.
    [[nodiscard]] const Expr& component(std::size_t a, std::size_t b) const { return pi_[a][b]; }
    [[nodiscard]] double operator()(std::size_t a, std::size_t b, const Point4& p) const;

    /// Max over i<j<k of |Pi^{im} d_m Pi^{jk} + cyclic| at each point, scaled
    /// by e^{-2t} (1 + |A| + |E|)^2.
    [[nodiscard]] Summary residual(std::span<const Point4> points) const;

private:
    std::array<std::array<Expr, 4>, 4> pi_;
    std::vector<Expr> jacobiator_;
    std::vector<Expr> magnitude_;
};

[[nodiscard]] Poissonization poissonize(const JacobiStructure& j);

} // namespace jacobi3

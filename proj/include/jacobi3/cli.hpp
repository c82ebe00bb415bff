#pragma once

// Configuration ingestion, subcommand dispatch and report emission for the
// jacobi3 command line tool.
//
// Exit codes: 0 when every check passes, 1 when a check fails or the
// mathematics refuses the input (degenerate fields, wrong structure kind,
// integration failure), 2 for configuration and usage errors.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jacobi3/expr.hpp"
#include "jacobi3/sampling.hpp"
#include "jacobi3/structure.hpp"
#include "jacobi3/summary.hpp"

namespace jacobi3::cli {

enum class Kind { rank3, rank2, poisson, custom };

[[nodiscard]] std::string_view to_string(Kind k);

struct ToleranceConfig {
    double residual = 1e-10;             ///< Jacobi equations, scaled
    double jacobi = 1e-8;                ///< nested bracket identity, scaled
    double first_order = 1e-10;          ///< first order rule, scaled
    double contact = 1e-10;              ///< contact identities
    double poissonization = 1e-10;       ///< 4-D Poisson residual, scaled
    double casimir = 1e-4;               ///< grad C x A - C E, relative
    double conservation = 1e-8;          ///< psi and H drift along flows
    double casimir_conservation = 1e-5;  ///< Casimir drift along flows
    double divergence = 1e-10;           ///< div v_H against its closed form, scaled
    double degeneracy = 1e-10;           ///< helicity, mu and |grad psi| floors at construction
};

struct StructureConfig {
    Kind kind = Kind::rank3;
    std::array<Expr, 3> a;  ///< rank3 and custom
    std::array<Expr, 3> e;  ///< custom
    Expr mu;                ///< rank2 and poisson
    Expr xi1;               ///< rank2
    Expr xi2;               ///< rank2
    Expr psi_hat;           ///< rank2, over {u, v}
    Expr psi;               ///< poisson
    SampleDomain domain;
    ToleranceConfig tolerances;
    std::uint64_t hash = 0; ///< FNV-1a of the canonical JSON rendering
};

/// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a(std::string_view bytes);

/// Parses a JSON document. Unknown keys, missing keys, malformed expressions
/// and invalid boxes raise ConfigError.
[[nodiscard]] StructureConfig parse_config(std::string_view json_text);
[[nodiscard]] StructureConfig load_config(const std::filesystem::path& path);

/// Builds the structure with the configured domain and degeneracy floor.
[[nodiscard]] JacobiStructure build_structure(const StructureConfig& config);

/// "x,y,z" with optional spaces; ConfigError otherwise.
[[nodiscard]] Point3 parse_point(std::string_view text);

enum class Metric { max_abs, max_scaled };

struct Check {
    std::string name;
    Summary summary;
    Metric metric = Metric::max_scaled;
    double tol = 0.0;

    [[nodiscard]] double measured() const { return metric == Metric::max_abs ? summary.max_abs : summary.max_scaled; }
    /// False for NaN.
    [[nodiscard]] bool passes() const { return measured() <= tol; }
};

struct RunReport {
    std::string command;
    std::uint64_t config_hash = 0;
    std::vector<std::string> lines; ///< deterministic body
    std::vector<Check> checks;
    bool refused = false;           ///< set when the command rejects the input outright
    double wall_seconds = 0.0;

    [[nodiscard]] bool passed() const;
};

/// Everything but the final wall time line is a pure function of the inputs.
void write_report(std::ostream& out, const RunReport& report);

/// %.17g
[[nodiscard]] std::string format_number(double v);

struct BracketOptions {
    std::string f;
    std::string g;
    std::vector<Point3> points; ///< empty: the first `count` domain samples
    std::size_t count = 10;
};

struct FlowOptions {
    std::string hamiltonian = "1";
    Point3 x0;
    double t_end = 10.0;
    std::size_t outputs = 100;
    std::optional<std::filesystem::path> csv;
    bool casimir_monitor = false; ///< rank2 only
    std::string gamma_bar = "0";
    std::string curve = "v";
    std::string side = "u";
    double arc_budget = 100.0;
};

struct CasimirCommandOptions {
    std::string gamma_bar = "0";
    std::string curve = "v";
    std::string side = "u";
    double arc_budget = 100.0;
    std::vector<Point3> points; ///< empty: the first `count` domain samples
    std::size_t count = 10;
};

struct PoissonizeOptions {
    double t_min = -1.0;
    double t_max = 1.0;
};

[[nodiscard]] RunReport cmd_verify(const StructureConfig& config);
[[nodiscard]] RunReport cmd_bracket(const StructureConfig& config, const BracketOptions& options);
[[nodiscard]] RunReport cmd_flow(const StructureConfig& config, const FlowOptions& options);
[[nodiscard]] RunReport cmd_casimir(const StructureConfig& config, const CasimirCommandOptions& options);
[[nodiscard]] RunReport cmd_contact(const StructureConfig& config);
[[nodiscard]] RunReport cmd_classify(const StructureConfig& config);
[[nodiscard]] RunReport cmd_poissonize(const StructureConfig& config, const PoissonizeOptions& options);
[[nodiscard]] RunReport cmd_conformal(const StructureConfig& config, const std::string& lambda);

/// Full command line entry point; args excludes the program name.
[[nodiscard]] int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace jacobi3::cli

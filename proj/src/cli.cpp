#include "jacobi3/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jacobi3/casimir.hpp"
#include "jacobi3/contact.hpp"
#include "jacobi3/errors.hpp"
#include "jacobi3/hamflow.hpp"

namespace jacobi3::cli {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where)
{
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

const json& member(const json& j, const std::string& key, const std::string& where)
{
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing key '" + key + "' in " + where);
    return *it;
}

Expr expression(const json& j, const std::string& key, VarSet allowed)
{
    if (!j.is_string()) throw ConfigError("'" + key + "' must be an expression string");
    try {
        return parse(j.get<std::string>(), allowed);
    } catch (const Error& e) {
        throw ConfigError("'" + key + "': " + e.what());
    }
}

std::array<Expr, 3> expression3(const json& j, const std::string& key)
{
    if (!j.is_array() || j.size() != 3) throw ConfigError("'" + key + "' must be an array of 3 expression strings");
    return {expression(j[0], key + "[0]", xyz_vars), expression(j[1], key + "[1]", xyz_vars),
            expression(j[2], key + "[2]", xyz_vars)};
}

Point3 point3(const json& j, const std::string& key)
{
    if (!j.is_array() || j.size() != 3) throw ConfigError("'" + key + "' must be an array of 3 numbers");
    std::array<double, 3> c{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!j[i].is_number()) throw ConfigError("'" + key + "' must be an array of 3 numbers");
        c[i] = j[i].get<double>();
        if (!std::isfinite(c[i])) throw ConfigError("'" + key + "' must be finite");
    }
    return {c[0], c[1], c[2]};
}

ToleranceConfig tolerances(const json& j)
{
    require_object(j, "'tolerances'");
    ToleranceConfig t;
    const std::map<std::string, double*> slots{{"residual", &t.residual},
                                               {"jacobi", &t.jacobi},
                                               {"first_order", &t.first_order},
                                               {"contact", &t.contact},
                                               {"poissonization", &t.poissonization},
                                               {"casimir", &t.casimir},
                                               {"conservation", &t.conservation},
                                               {"casimir_conservation", &t.casimir_conservation},
                                               {"divergence", &t.divergence},
                                               {"degeneracy", &t.degeneracy}};
    for (const auto& [key, value] : j.items()) {
        const auto it = slots.find(key);
        if (it == slots.end()) throw ConfigError("unknown key '" + key + "' in 'tolerances'");
        if (!value.is_number() || !(value.get<double>() >= 0.0)) {
            throw ConfigError("tolerance '" + key + "' must be a non-negative number");
        }
        *it->second = value.get<double>();
    }
    return t;
}

Kind kind_of(const json& j)
{
    if (!j.is_string()) throw ConfigError("'kind' must be a string");
    const std::string k = j.get<std::string>();
    if (k == "rank3") return Kind::rank3;
    if (k == "rank2") return Kind::rank2;
    if (k == "poisson") return Kind::poisson;
    if (k == "custom") return Kind::custom;
    throw ConfigError("'kind' must be one of rank3, rank2, poisson, custom; got '" + k + "'");
}

std::string hex64(std::uint64_t v)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string summary_text(const Summary& s)
{
    return "max_abs=" + format_number(s.max_abs) + " mean_abs=" + format_number(s.mean_abs) +
           " max_scaled=" + format_number(s.max_scaled) + " points=" + std::to_string(s.points);
}

std::string point_text(const Point3& p)
{
    return format_number(p.x) + " " + format_number(p.y) + " " + format_number(p.z);
}

RunReport start(const std::string& command, const StructureConfig& config)
{
    RunReport r;
    r.command = command;
    r.config_hash = config.hash;
    r.lines.push_back("kind: " + std::string(to_string(config.kind)));
    return r;
}

std::vector<Point3> table_points(const StructureConfig& config, const std::vector<Point3>& given, std::size_t count)
{
    if (!given.empty()) return given;
    auto pts = config.domain.points();
    pts.resize(std::min(pts.size(), count));
    return pts;
}

void add_residual_checks(RunReport& r, const JacobiStructure& j, const StructureConfig& config)
{
    const auto pts = config.domain.points();
    const ResidualReport res = verify(j, pts);
    SummaryBuilder r1;
    SummaryBuilder r2;
    for (const ResidualPoint& rp : res.records) {
        r1.add(rp.r1, rp.scale);
        r2.add(std::max({std::fabs(rp.r2[0]), std::fabs(rp.r2[1]), std::fabs(rp.r2[2])}), rp.scale);
    }
    r.lines.push_back("r1: " + summary_text(r1.result()));
    r.lines.push_back("r2: " + summary_text(r2.result()));
    r.checks.push_back({"jacobi_equations", res.summary, Metric::max_scaled, config.tolerances.residual});
}

Transversal transversal_of(const std::string& curve, const std::string& side)
{
    try {
        return {parse(curve, uv_vars), parse(side, uv_vars)};
    } catch (const Error& e) {
        throw ConfigError(std::string("transversal: ") + e.what());
    }
}

Expr gamma_bar_of(const std::string& text)
{
    try {
        return parse(text, var_bit(Var::u));
    } catch (const Error& e) {
        throw ConfigError(std::string("gamma_bar: ") + e.what());
    }
}

ScalarField field_option(const std::string& text, const std::string& name)
{
    try {
        return ScalarField(parse(text, xyz_vars));
    } catch (const Error& e) {
        throw ConfigError(name + ": " + e.what());
    }
}

} // namespace

std::string_view to_string(Kind k)
{
    switch (k) {
    case Kind::rank3: return "rank3";
    case Kind::rank2: return "rank2";
    case Kind::poisson: return "poisson";
    case Kind::custom: return "custom";
    }
    return "?";
}

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

StructureConfig parse_config(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    require_object(doc, "the configuration");

    StructureConfig c;
    c.kind = kind_of(member(doc, "kind", "the configuration"));
    std::set<std::string> allowed{"kind", "domain", "samples", "seed", "tolerances"};
    switch (c.kind) {
    case Kind::rank3:
        allowed.insert("A");
        c.a = expression3(member(doc, "A", "a rank3 configuration"), "A");
        break;
    case Kind::rank2:
        allowed.insert({"mu", "xi1", "xi2", "psi_hat"});
        c.mu = expression(member(doc, "mu", "a rank2 configuration"), "mu", xyz_vars);
        c.xi1 = expression(member(doc, "xi1", "a rank2 configuration"), "xi1", xyz_vars);
        c.xi2 = expression(member(doc, "xi2", "a rank2 configuration"), "xi2", xyz_vars);
        c.psi_hat = expression(member(doc, "psi_hat", "a rank2 configuration"), "psi_hat", uv_vars);
        break;
    case Kind::poisson:
        allowed.insert({"mu", "psi"});
        c.mu = expression(member(doc, "mu", "a poisson configuration"), "mu", xyz_vars);
        c.psi = expression(member(doc, "psi", "a poisson configuration"), "psi", xyz_vars);
        break;
    case Kind::custom:
        allowed.insert({"A", "E"});
        c.a = expression3(member(doc, "A", "a custom configuration"), "A");
        c.e = expression3(member(doc, "E", "a custom configuration"), "E");
        break;
    }
    reject_unknown(doc, allowed, "the configuration");

    const json& domain = member(doc, "domain", "the configuration");
    require_object(domain, "'domain'");
    reject_unknown(domain, {"min", "max"}, "'domain'");
    c.domain.box = Box{point3(member(domain, "min", "'domain'"), "domain.min"),
                       point3(member(domain, "max", "'domain'"), "domain.max")};
    try {
        c.domain.box.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("'domain': ") + e.what());
    }

    if (const auto it = doc.find("samples"); it != doc.end()) {
        if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
            throw ConfigError("'samples' must be a positive integer");
        }
        c.domain.samples = it->get<std::size_t>();
    }
    if (const auto it = doc.find("seed"); it != doc.end()) {
        if (it->is_number_unsigned()) {
            c.domain.seed = it->get<std::uint64_t>();
        } else if (it->is_number_integer()) {
            c.domain.seed = static_cast<std::uint64_t>(it->get<std::int64_t>());
        } else {
            throw ConfigError("'seed' must be a 64-bit integer");
        }
    }
    if (const auto it = doc.find("tolerances"); it != doc.end()) c.tolerances = tolerances(*it);

    c.hash = fnv1a(doc.dump());
    return c;
}

StructureConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read configuration file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

JacobiStructure build_structure(const StructureConfig& c)
{
    const double tol = c.tolerances.degeneracy;
    switch (c.kind) {
    case Kind::rank3:
        return build_rank3({ScalarField(c.a[0]), ScalarField(c.a[1]), ScalarField(c.a[2])}, c.domain, tol);
    case Kind::rank2:
        return build_rank2(ScalarField(c.mu), ScalarField(c.xi1), ScalarField(c.xi2), c.psi_hat, c.domain, tol);
    case Kind::poisson:
        return build_poisson(ScalarField(c.mu), ScalarField(c.psi), c.domain, tol);
    case Kind::custom: {
        const JacobiStructure raw = build_custom({ScalarField(c.a[0]), ScalarField(c.a[1]), ScalarField(c.a[2])},
                                                 {ScalarField(c.e[0]), ScalarField(c.e[1]), ScalarField(c.e[2])});
        return JacobiStructure(raw.A(), raw.E(), raw.kind(), c.domain);
    }
    }
    throw ConfigError("unsupported structure kind");
}

Point3 parse_point(std::string_view text)
{
    std::array<double, 3> c{};
    std::size_t pos = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t end = i < 2 ? text.find(',', pos) : text.size();
        if (end == std::string_view::npos) throw ConfigError("point '" + std::string(text) + "' must be x,y,z");
        const std::string part(text.substr(pos, end - pos));
        std::size_t used = 0;
        try {
            c[i] = std::stod(part, &used);
        } catch (const std::exception&) {
            throw ConfigError("point '" + std::string(text) + "' must be x,y,z");
        }
        if (part.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(c[i])) {
            throw ConfigError("point '" + std::string(text) + "' must be x,y,z");
        }
        pos = end + 1;
    }
    return {c[0], c[1], c[2]};
}

bool RunReport::passed() const
{
    return !refused && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passes(); });
}

void write_report(std::ostream& out, const RunReport& r)
{
    out << "command: " << r.command << '\n';
    out << "config_hash: fnv1a64:" << hex64(r.config_hash) << '\n';
    for (const std::string& line : r.lines) out << line << '\n';
    for (const Check& c : r.checks) {
        out << "check " << c.name << ": " << summary_text(c.summary) << " verdict_on="
            << (c.metric == Metric::max_abs ? "max_abs" : "max_scaled") << " tol=" << format_number(c.tol) << ' '
            << (c.passes() ? "PASS" : "FAIL") << '\n';
    }
    out << "verdict: " << (r.passed() ? "PASS" : "FAIL") << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "wall_time_s: %.3f", r.wall_seconds);
    out << buf << '\n';
}

RunReport cmd_verify(const StructureConfig& config)
{
    RunReport r = start("verify", config);
    const JacobiStructure j = build_structure(config);
    const auto pts = config.domain.points();
    r.lines.push_back("A: " + to_string(j.A()));
    r.lines.push_back("E: " + to_string(j.E()));
    add_residual_checks(r, j, config);
    for (std::uint64_t t = 0; t < 3; ++t) {
        const std::uint64_t base = config.domain.seed + 3 * t;
        const ScalarField f = random_polynomial(base, 3);
        const ScalarField g = random_polynomial(base + 1, 3);
        const ScalarField h = random_polynomial(base + 2, 3);
        r.checks.push_back({"jacobi_identity_triple_" + std::to_string(t), jacobi_identity_residual(j, f, g, h, pts),
                            Metric::max_scaled, config.tolerances.jacobi});
        if (t == 0) {
            r.checks.push_back({"first_order_rule", first_order_rule_residual(j, f, g, h, pts), Metric::max_scaled,
                                config.tolerances.first_order});
        }
    }
    return r;
}

RunReport cmd_bracket(const StructureConfig& config, const BracketOptions& options)
{
    RunReport r = start("bracket", config);
    const JacobiStructure j = build_structure(config);
    const ScalarField f = field_option(options.f, "f");
    const ScalarField g = field_option(options.g, "g");
    const ScalarField fg = bracket(j, f, g);
    r.lines.push_back("bracket: " + to_string(fg));
    r.lines.push_back("x y z value");
    const FieldProgram prog{fg};
    for (const Point3& p : table_points(config, options.points, options.count)) {
        r.lines.push_back(point_text(p) + " " + format_number(prog(p).front()));
    }
    return r;
}

RunReport cmd_flow(const StructureConfig& config, const FlowOptions& options)
{
    RunReport r = start("flow", config);
    const JacobiStructure j = build_structure(config);
    const ScalarField h = field_option(options.hamiltonian, "H");
    FlowControls controls;
    controls.outputs = options.outputs;
    if (options.casimir_monitor) {
        CasimirOptions co;
        co.transversal = transversal_of(options.curve, options.side);
        co.arc_budget = options.arc_budget;
        controls.casimir.emplace(j, gamma_bar_of(options.gamma_bar), co);
    }
    const Trajectory tr = integrate(j, h, options.x0, options.t_end, controls);
    r.lines.push_back("H: " + to_string(h));
    r.lines.push_back("x0: " + point_text(options.x0));
    r.lines.push_back("t_end: " + format_number(options.t_end));
    r.lines.push_back("final: " + point_text(tr.states.back()));
    if (options.csv) {
        std::ofstream out(*options.csv, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + options.csv->string() + "'");
        write_csv(out, tr);
        r.lines.push_back("csv: " + options.csv->string() + " (" + std::to_string(tr.size()) + " rows)");
    }

    std::vector<std::string> conserved;
    if (tr.monitors.psi && h.expr().is_constant()) conserved.push_back("psi");
    if (config.kind == Kind::poisson) conserved.push_back("H");
    if (tr.monitors.casimir && h.expr().is_constant()) conserved.push_back("casimir");
    for (const Drift& d : conservation_report(tr, conserved)) {
        Summary s;
        s.max_abs = s.max_scaled = d.max_drift;
        s.points = tr.size();
        const double tol =
            d.quantity == "casimir" ? config.tolerances.casimir_conservation : config.tolerances.conservation;
        r.checks.push_back({"drift_" + d.quantity, s, Metric::max_scaled, tol});
    }
    if (config.kind != Kind::custom) {
        r.checks.push_back({"divergence_along_trajectory", divergence_check(j, h, tr.states), Metric::max_scaled,
                            config.tolerances.divergence});
    }
    return r;
}

RunReport cmd_casimir(const StructureConfig& config, const CasimirCommandOptions& options)
{
    RunReport r = start("casimir", config);
    const JacobiStructure j = build_structure(config);
    if (config.kind != Kind::rank2) {
        r.lines.push_back(config.kind == Kind::rank3
                              ? "rank3 structures have no nontrivial Casimirs; only rank2 structures do"
                              : "casimir requires a rank2 structure, got " + std::string(to_string(config.kind)));
        r.refused = true;
        return r;
    }
    CasimirOptions co;
    co.transversal = transversal_of(options.curve, options.side);
    co.arc_budget = options.arc_budget;
    const CasimirField c(j, gamma_bar_of(options.gamma_bar), co);
    const auto pts = table_points(config, options.points, options.count);
    r.lines.push_back("gamma_bar: " + to_string(c.gamma_bar()));
    r.lines.push_back("transversal: " + to_string(co.transversal.curve) + " = 0, " + to_string(co.transversal.side) +
                      " > 0");
    r.lines.push_back("x y z C");
    for (const Point3& p : pts) r.lines.push_back(point_text(p) + " " + format_number(c(p)));
    const CasimirReport rep = casimir_residual(j, c, pts);
    r.checks.push_back({"casimir_cross", rep.cross, Metric::max_abs, config.tolerances.casimir});
    r.checks.push_back({"casimir_transport", rep.transport, Metric::max_abs, config.tolerances.casimir});
    return r;
}

RunReport cmd_contact(const StructureConfig& config)
{
    RunReport r = start("contact", config);
    const JacobiStructure j = build_structure(config);
    if (config.kind != Kind::rank3) {
        r.lines.push_back("contact form requires a rank3 structure, got " + std::string(to_string(config.kind)));
        r.refused = true;
        return r;
    }
    const ContactForm form = contact_form(j);
    r.lines.push_back("theta: " + to_string(form.theta));
    const ContactReport rep = contact_identities(j, config.domain.points());
    const double tol = config.tolerances.contact;
    r.checks.push_back({"reeb", rep.reeb, Metric::max_abs, tol});
    r.checks.push_back({"volume", rep.volume, Metric::max_abs, tol});
    r.checks.push_back({"annihilation", rep.annihilation, Metric::max_scaled, tol});
    r.checks.push_back({"coupling", rep.coupling, Metric::max_scaled, tol});
    return r;
}

RunReport cmd_classify(const StructureConfig& config)
{
    RunReport r = start("classify", config);
    const JacobiStructure j = build_structure(config);
    auto pts = config.domain.points();
    const auto lattice = box_lattice(config.domain.box);
    pts.insert(pts.end(), lattice.begin(), lattice.end());
    const Rank rank = classify_rank(j, pts);
    r.lines.push_back("points: " + std::to_string(pts.size()));
    r.lines.push_back("rank: " + std::string(to_string(rank)));
    r.refused = rank == Rank::degenerate || rank == Rank::mixed;
    return r;
}

RunReport cmd_poissonize(const StructureConfig& config, const PoissonizeOptions& options)
{
    RunReport r = start("poissonize", config);
    if (!(options.t_min < options.t_max)) throw ConfigError("poissonize: t-min must be below t-max");
    const JacobiStructure j = build_structure(config);
    const Poissonization pi = poissonize(j);
    const auto pts =
        sample_box4(config.domain.box, options.t_min, options.t_max, config.domain.samples, config.domain.seed);
    r.lines.push_back("t_range: " + format_number(options.t_min) + " " + format_number(options.t_max));
    r.checks.push_back({"poisson_jacobi_4d", pi.residual(pts), Metric::max_scaled, config.tolerances.poissonization});
    return r;
}

RunReport cmd_conformal(const StructureConfig& config, const std::string& lambda)
{
    RunReport r = start("conformal", config);
    const JacobiStructure j = build_structure(config);
    const ScalarField l = field_option(lambda, "lambda");
    const JacobiStructure t = conformal(j, l);
    const auto simplified = [](const VectorField3& v) {
        return VectorField3(ScalarField(simplify(v[0].expr())), ScalarField(simplify(v[1].expr())),
                            ScalarField(simplify(v[2].expr())));
    };
    r.lines.push_back("lambda: " + to_string(l));
    r.lines.push_back("A: " + to_string(simplified(t.A())));
    r.lines.push_back("E: " + to_string(simplified(t.E())));
    add_residual_checks(r, t, config);
    return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Jacobi structures on R^3: construction, verification, Casimirs and Hamiltonian flows", "jacobi3"};
    app.require_subcommand(1);

    std::string config_path;
    auto with_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON structure configuration")->required();
        return sub;
    };

    CLI::App* verify_cmd = with_config(app.add_subcommand("verify", "Jacobi equations, bracket identity, first order rule"));

    BracketOptions bo;
    std::vector<std::string> bracket_points;
    CLI::App* bracket_cmd = with_config(app.add_subcommand("bracket", "tabulate {f, g}"));
    bracket_cmd->add_option("-f,--f", bo.f, "first function of x, y, z")->required();
    bracket_cmd->add_option("-g,--g", bo.g, "second function of x, y, z")->required();
    bracket_cmd->add_option("--point", bracket_points, "evaluation point x,y,z (repeatable)");
    bracket_cmd->add_option("--count", bo.count, "number of domain samples when no point is given");

    FlowOptions fo;
    std::string x0 = "0,0,0";
    std::string csv;
    CLI::App* flow_cmd = with_config(app.add_subcommand("flow", "integrate the Hamiltonian flow of H"));
    flow_cmd->add_option("--H", fo.hamiltonian, "Hamiltonian, a function of x, y, z")->capture_default_str();
    flow_cmd->add_option("--x0", x0, "initial point x,y,z")->required();
    flow_cmd->add_option("--t-end", fo.t_end, "final time")->capture_default_str();
    flow_cmd->add_option("--outputs", fo.outputs, "number of output intervals")->capture_default_str();
    flow_cmd->add_option("--out", csv, "trajectory CSV file");
    flow_cmd->add_flag("--casimir-monitor", fo.casimir_monitor, "also monitor a Casimir (rank2 only)");
    flow_cmd->add_option("--gamma-bar", fo.gamma_bar, "Casimir boundary data in u = psi")->capture_default_str();
    flow_cmd->add_option("--curve", fo.curve, "transversal curve in u, v")->capture_default_str();
    flow_cmd->add_option("--side", fo.side, "transversal side selector in u, v")->capture_default_str();
    flow_cmd->add_option("--arc-budget", fo.arc_budget, "characteristic arc length budget")->capture_default_str();

    CasimirCommandOptions co;
    std::vector<std::string> casimir_points;
    CLI::App* casimir_cmd = with_config(app.add_subcommand("casimir", "tabulate a Casimir function"));
    casimir_cmd->add_option("--gamma-bar", co.gamma_bar, "boundary data in u = psi")->capture_default_str();
    casimir_cmd->add_option("--curve", co.curve, "transversal curve in u, v")->capture_default_str();
    casimir_cmd->add_option("--side", co.side, "transversal side selector in u, v")->capture_default_str();
    casimir_cmd->add_option("--arc-budget", co.arc_budget, "characteristic arc length budget")->capture_default_str();
    casimir_cmd->add_option("--point", casimir_points, "evaluation point x,y,z (repeatable)");
    casimir_cmd->add_option("--count", co.count, "number of domain samples when no point is given");

    CLI::App* contact_cmd = with_config(app.add_subcommand("contact", "contact form identities (rank3)"));
    CLI::App* classify_cmd = with_config(app.add_subcommand("classify", "rank of the structure over the domain"));

    PoissonizeOptions po;
    CLI::App* poissonize_cmd = with_config(app.add_subcommand("poissonize", "4-D Poisson residual"));
    poissonize_cmd->add_option("--t-min", po.t_min, "lower bound of the t samples")->capture_default_str();
    poissonize_cmd->add_option("--t-max", po.t_max, "upper bound of the t samples")->capture_default_str();

    std::string lambda;
    CLI::App* conformal_cmd = with_config(app.add_subcommand("conformal", "verify the conformally changed structure"));
    conformal_cmd->add_option("--lambda", lambda, "conformal factor, a function of x, y, z")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    std::string echo = "jacobi3";
    for (const std::string& a : args) echo += " " + a;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const StructureConfig config = load_config(config_path);
        RunReport report;
        if (verify_cmd->parsed()) {
            report = cmd_verify(config);
        } else if (bracket_cmd->parsed()) {
            for (const std::string& p : bracket_points) bo.points.push_back(parse_point(p));
            report = cmd_bracket(config, bo);
        } else if (flow_cmd->parsed()) {
            fo.x0 = parse_point(x0);
            if (!csv.empty()) fo.csv = csv;
            report = cmd_flow(config, fo);
        } else if (casimir_cmd->parsed()) {
            for (const std::string& p : casimir_points) co.points.push_back(parse_point(p));
            report = cmd_casimir(config, co);
        } else if (contact_cmd->parsed()) {
            report = cmd_contact(config);
        } else if (classify_cmd->parsed()) {
            report = cmd_classify(config);
        } else if (poissonize_cmd->parsed()) {
            report = cmd_poissonize(config, po);
        } else {
            report = cmd_conformal(config, lambda);
        }
        report.command = echo;
        report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_report(out, report);
        return report.passed() ? 0 : 1;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace jacobi3::cli

// plap: command-line front end. Every command reads its parameters from flags
// (or a --config JSON file), writes files into --out, and embeds the run's
// configuration hash and seed in each file.

#include "plap/core.hpp"
#include "plap/fields.hpp"
#include "plap/geometry.hpp"
#include "plap/io.hpp"
#include "plap/json_util.hpp"
#include "plap/kernels.hpp"
#include "plap/mesh.hpp"
#include "plap/solver.hpp"
#include "plap/spectral.hpp"
#include "plap/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using plap::Error;
using plap::ErrorKind;
using plap::Point;
using plap::fail;
using plap::require;
using plap::io::fmt17;

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Validation:
        return 2;
    case ErrorKind::Integration:
    case ErrorKind::SearchFailure:
    case ErrorKind::BracketFailure:
    case ErrorKind::DegenerateState:
        return 3;
    case ErrorKind::Verification:
    case ErrorKind::SingularPoint:
    case ErrorKind::OutOfTube:
    case ErrorKind::DegenerateGradient:
    case ErrorKind::Exclusion:
        return 4;
    case ErrorKind::MeshGeneration:
    case ErrorKind::Location:
    case ErrorKind::LineSearch:
    case ErrorKind::Solver:
        return 5;
    }
    return 5;
}

// ---------------------------------------------------------------------------
// Parameter tables

enum class Type { Number, Integer, Text, Json, NumberList, IntRange, Flag };

struct OptSpec {
    std::string name;
    Type type;
    json fallback;  // null means "not set"
    std::string help;
};

struct Command {
    std::string name;
    std::string help;
    std::vector<OptSpec> options;
    std::function<int(const plap::io::RunConfig&)> run;
};

json parse_value(const OptSpec& spec, const std::string& raw)
{
    auto bad = [&]() -> json { fail(ErrorKind::Validation, "--" + spec.name + ": cannot parse '" + raw + "'"); };
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            bad();
        }
        if (used != s.size() || !std::isfinite(v)) {
            bad();
        }
        return v;
    };
    auto integer = [&](const std::string& s) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(s, &used);
        } catch (const std::exception&) {
            bad();
        }
        if (used != s.size()) {
            bad();
        }
        return static_cast<int>(v);
    };
    switch (spec.type) {
    case Type::Number:
        return number(raw);
    case Type::Integer:
        return integer(raw);
    case Type::Text:
        return raw;
    case Type::Flag:
        return raw == "true" || raw == "1";
    case Type::Json: {
        const std::string text = (!raw.empty() && raw[0] == '@') ? plap::io::read_file(raw.substr(1)) : raw;
        try {
            return json::parse(text);
        } catch (const json::exception&) {
            return bad();
        }
    }
    case Type::NumberList: {
        json out = json::array();
        std::stringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(number(item));
        }
        if (out.empty()) {
            bad();
        }
        return out;
    }
    case Type::IntRange: {
        const auto dots = raw.find("..");
        if (dots == std::string::npos) {
            const int v = integer(raw);
            return json::array({v, v});
        }
        return json::array({integer(raw.substr(0, dots)), integer(raw.substr(dots + 2))});
    }
    }
    return bad();
}

/// Checks the type of a value coming from a config file.
// Config files may write 3 where a flag would give 3.0; store both alike so
// the configuration hash does not depend on the spelling.
json canonical(const OptSpec& spec, const json& v)
{
    if (spec.type == Type::Number && v.is_number()) {
        return v.get<double>();
    }
    if (spec.type == Type::NumberList && v.is_array()) {
        json out = json::array();
        for (const auto& x : v) {
            out.push_back(x.get<double>());
        }
        return out;
    }
    return v;
}

void check_type(const OptSpec& spec, const json& v)
{
    bool ok = v.is_null();
    switch (spec.type) {
    case Type::Number:
        ok = ok || v.is_number();
        break;
    case Type::Integer:
        ok = ok || v.is_number_integer();
        break;
    case Type::Text:
        ok = ok || v.is_string();
        break;
    case Type::Flag:
        ok = ok || v.is_boolean();
        break;
    case Type::Json:
        ok = true;
        break;
    case Type::NumberList:
        ok = ok || (v.is_array() && !v.empty());
        if (v.is_array()) {
            for (const auto& x : v) {
                ok = ok && x.is_number();
            }
        }
        break;
    case Type::IntRange:
        ok = ok || (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer());
        break;
    }
    require(ok, ErrorKind::Validation, "config: parameter '" + spec.name + "' has the wrong type");
}

// ---------------------------------------------------------------------------
// Helpers shared by commands

struct Output {
    std::string dir = ".";
    bool json_stdout = false;

    [[nodiscard]] std::string path(const std::string& name) const
    {
        return (std::filesystem::path(dir) / name).string();
    }
};

Output g_output;

double num(const json& params, const std::string& key)
{
    return params.at(key).get<double>();
}

int integer(const json& params, const std::string& key)
{
    return params.at(key).get<int>();
}

std::vector<double> numbers(const json& params, const std::string& key)
{
    return params.at(key).get<std::vector<double>>();
}

Point point_of(const json& params, const std::string& key)
{
    return plap::json_util::to_point(params.at(key));
}

plap::solver::Vec2 vec2_of(const json& params, const std::string& key)
{
    const auto v = numbers(params, key);
    require(v.size() == 2, ErrorKind::Validation, "--" + key + " needs two coordinates");
    return {v[0], v[1]};
}

void require_positive(const json& params, std::initializer_list<const char*> keys)
{
    for (const char* key : keys) {
        require(!params.at(key).is_null() && params.at(key).get<double>() > 0.0, ErrorKind::Validation,
                std::string("--") + key + " must be positive");
    }
}

json with_meta(const plap::io::RunConfig& cfg, json body)
{
    body["meta"] = cfg.meta();
    return body;
}

void write_json(const plap::io::RunConfig& cfg, const std::string& name, const json& body)
{
    plap::io::write_file(g_output.path(name), with_meta(cfg, body).dump(1) + "\n");
}

void write_csv(const plap::io::RunConfig& cfg, const std::string& name, const std::string& csv)
{
    plap::io::write_file(g_output.path(name), cfg.csv_comment() + csv);
}

void print_summary(const json& summary, const std::string& text)
{
    if (g_output.json_stdout) {
        std::cout << summary.dump() << "\n";
    } else {
        std::cout << text << "\n";
    }
}

std::string pass_word(bool pass)
{
    return pass ? "pass" : "fail";
}

// ---------------------------------------------------------------------------
// Commands

int cmd_beta(const plap::io::RunConfig& cfg)
{
    const double p = num(cfg.params, "p");
    const auto range = cfg.params.at("k").get<std::vector<int>>();
    require(p > 1.0, ErrorKind::Validation, "beta: p must exceed 1");
    require(range[0] >= 1 && range[1] >= range[0], ErrorKind::Validation, "beta: k range must satisfy 1 <= kmin <= kmax");
    std::string csv = "k,beta_closed,beta_shooting,difference,quadratic_residual\n";
    json rows = json::array();
    for (int k = range[0]; k <= range[1]; ++k) {
        const double closed = plap::spectral::beta_closed_form(p, k);
        const double shot = plap::spectral::beta_by_shooting(p, k);
        const double quad = plap::spectral::exponent_quadratic(p, k, closed);
        csv += std::to_string(k) + "," + fmt17(closed) + "," + fmt17(shot) + "," + fmt17(closed - shot) + "," +
               fmt17(quad) + "\n";
        rows.push_back({{"k", k}, {"beta_closed", closed}, {"beta_shooting", shot}, {"difference", closed - shot},
                        {"quadratic_residual", quad}});
    }
    write_csv(cfg, "beta.csv", csv);
    const json summary = {{"p", p}, {"rows", rows}};
    write_json(cfg, "beta.json", summary);
    std::string text;
    for (const auto& r : rows) {
        text += "k=" + std::to_string(r["k"].get<int>()) + " beta_closed=" + fmt17(r["beta_closed"]) +
                " beta_shooting=" + fmt17(r["beta_shooting"]) + "\n";
    }
    print_summary(summary, text.substr(0, text.size() - 1));
    return 0;
}

int cmd_omega(const plap::io::RunConfig& cfg)
{
    const double p = num(cfg.params, "p");
    const int k = integer(cfg.params, "k");
    const int m = integer(cfg.params, "m");
    const auto pair = plap::spectral::tabulate(p, k, m, plap::fields::profile_tolerances());
    const double zero = plap::spectral::first_zero(p, pair.beta, plap::fields::profile_tolerances());
    json summary = plap::spectral::summary_json(pair);
    summary["first_zero"] = zero;
    summary["antiperiod_error"] = zero - std::numbers::pi / k;
    write_csv(cfg, "omega.csv", plap::spectral::profile_csv(pair));
    write_json(cfg, "omega.json", summary);
    print_summary(summary, "beta=" + fmt17(pair.beta) + " antiperiod=" + fmt17(zero) +
                               " quadratic_residual=" + fmt17(pair.quadratic_residual));
    return 0;
}

plap::solver::Mesh2D build_mesh(const json& params)
{
    const std::string domain = params.at("domain").get<std::string>();
    const double h = num(params, "h");
    const double radius = num(params, "radius");
    if (domain == "sector") {
        return plap::solver::mesh_sector(num(params, "angle"), radius, h);
    }
    require(domain == "disk", ErrorKind::Validation, "--domain must be disk or sector");
    std::optional<double> eps;
    if (!params.at("epsilon").is_null()) {
        eps = num(params, "epsilon");
    }
    if (params.at("a").is_null()) {
        require(!eps, ErrorKind::Validation, "--epsilon needs --a");
        plap::solver::DiskMeshOptions opts;
        opts.radius = radius;
        opts.h = h;
        return plap::solver::mesh_disk_base(opts);
    }
    const auto a = vec2_of(params, "a");
    require(std::abs(std::hypot(a[0], a[1]) - radius) <= 1e-9 * radius, ErrorKind::Validation,
            "--a must lie on the circle of radius --radius");
    return plap::solver::mesh_disk(radius, a, eps, h);
}

int cmd_assemble(const plap::io::RunConfig& cfg)
{
    require_positive(cfg.params, {"h", "radius", "angle"});
    const auto mesh = build_mesh(cfg.params);
    json body = mesh.to_json();
    write_json(cfg, "mesh.json", body);
    int inner = 0;
    for (const auto& e : mesh.boundary_edges) {
        inner += e.tag == "inner-arc" ? 1 : 0;
    }
    const json summary = {{"nodes", mesh.node_count()},
                          {"triangles", mesh.triangles.size()},
                          {"boundary_edges", mesh.boundary_edges.size()},
                          {"inner_arc_edges", inner}};
    print_summary(summary, "nodes=" + std::to_string(mesh.node_count()) +
                               " triangles=" + std::to_string(mesh.triangles.size()));
    return 0;
}

int cmd_residual(const plap::io::RunConfig& cfg)
{
    const json& params = cfg.params;
    require(!params.at("field").is_null(), ErrorKind::Validation, "residual: --field is required");
    require_positive(params, {"h", "radius", "min_distance"});
    require(integer(params, "samples") > 0, ErrorKind::Validation, "residual: --samples must be positive");
    const auto u = plap::fields::make_field(params.at("field"));
    double p = u.p();
    if (!params.at("p").is_null()) {
        p = num(params, "p");
    }
    require(std::isfinite(p) && p > 1.0, ErrorKind::Validation, "residual: p must be given (or declared by the field) and exceed 1");
    const int n = u.dimension();
    Point center = Point::Zero(n);
    if (!params.at("center").is_null()) {
        center = point_of(params, "center");
        require(center.size() == n, ErrorKind::Validation, "residual: --center dimension mismatch");
    }
    const double h = num(params, "h");
    const double radius = num(params, "radius");
    const double min_distance = num(params, "min_distance");
    const int wanted = integer(params, "samples");
    const std::vector<double> steps{1e-2, 5e-3, 2.5e-3};

    plap::io::Random rng(cfg.seed);
    std::string csv;
    for (int i = 1; i <= n; ++i) {
        csv += "x" + std::to_string(i) + ",";
    }
    csv += "h,residual,normalized,pass,order\n";
    int accepted = 0, passed = 0, degenerate = 0, attempts = 0;
    double worst = 0.0, min_order = std::numeric_limits<double>::infinity();
    int orders = 0;
    while (accepted < wanted) {
        require(++attempts <= 1000 * wanted, ErrorKind::Verification, "residual: too few admissible samples");
        Point x(n);
        // Uniform in the ball by rejection from the cube.
        do {
            for (int i = 0; i < n; ++i) {
                x[i] = rng.uniform(-1.0, 1.0);
            }
        } while (x.norm() > 1.0);
        x = center + radius * x;
        if (u.singular_distance(x) < min_distance) {
            continue;
        }
        plap::verify::ResidualReport rep;
        try {
            rep = plap::verify::plaplace_residual(u, p, x, h);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::DegenerateGradient) {
                ++degenerate;
                continue;
            }
            throw;
        }
        const auto conv = plap::verify::convergence_order(u, p, x, steps);
        ++accepted;
        passed += rep.pass ? 1 : 0;
        worst = std::max(worst, std::abs(rep.normalized));
        if (!conv.skipped) {
            ++orders;
            min_order = std::min(min_order, conv.slope);
        }
        for (int i = 0; i < n; ++i) {
            csv += fmt17(x[i]) + ",";
        }
        csv += fmt17(h) + "," + fmt17(rep.residual) + "," + fmt17(rep.normalized) + "," + (rep.pass ? "1" : "0") + "," +
               (conv.skipped ? std::string("nan") : fmt17(conv.slope)) + "\n";
    }
    const bool pass = passed == accepted;
    const json summary = {{"field", u.description()},
                          {"p", p},
                          {"samples", accepted},
                          {"passed", passed},
                          {"degenerate_skipped", degenerate},
                          {"max_normalized", worst},
                          {"threshold", plap::verify::kResidualThreshold},
                          {"orders_measured", orders},
                          {"min_order", orders > 0 ? json(min_order) : json(nullptr)},
                          {"pass", pass}};
    write_csv(cfg, "residual.csv", csv);
    write_json(cfg, "residual.json", summary);
    print_summary(summary, u.description() + ": " + std::to_string(passed) + "/" + std::to_string(accepted) +
                               " samples pass, max normalized residual " + fmt17(worst) + " -> " + pass_word(pass));
    return pass ? 0 : 4;
}

int cmd_spherical(const plap::io::RunConfig& cfg)
{
    const double p = num(cfg.params, "p");
    const int k = integer(cfg.params, "k");
    const double h = num(cfg.params, "h");
    const int count = integer(cfg.params, "samples");
    require(h > 0.0 && count > 0, ErrorKind::Validation, "spherical: h and samples must be positive");
    const auto pair = plap::spectral::tabulate(p, k, plap::fields::kDefaultProfileNodes, plap::fields::profile_tolerances());
    plap::io::Random rng(cfg.seed);
    std::string csv = "phi,theta,residual\n";
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const double phi = rng.uniform(0.1, std::numbers::pi - 0.1);
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double r = plap::verify::spherical_residual_3d(pair, pair.beta, phi, theta, h);
        worst = std::max(worst, std::abs(r));
        csv += fmt17(phi) + "," + fmt17(theta) + "," + fmt17(r) + "\n";
    }
    const bool pass = worst <= plap::verify::kResidualThreshold;
    const json summary = {{"p", p}, {"k", k}, {"beta", pair.beta}, {"samples", count}, {"max_residual", worst}, {"pass", pass}};
    write_csv(cfg, "spherical.csv", csv);
    write_json(cfg, "spherical.json", summary);
    print_summary(summary, "max spherical residual " + fmt17(worst) + " -> " + pass_word(pass));
    return pass ? 0 : 4;
}

int cmd_limits(const plap::io::RunConfig& cfg)
{
    const json& params = cfg.params;
    const auto u = plap::fields::make_field(params.at("field"));
    const auto g = plap::geometry::DomainGeometry::from_json(params.at("geometry"));
    const Point a = point_of(params, "a");
    require(a.size() == u.dimension() && g.dimension() == u.dimension(), ErrorKind::Validation,
            "limits: field, geometry and a must share a dimension");
    const auto proj = plap::geometry::project(g, a);
    require(std::abs(proj.signed_distance) <= 1e-9, ErrorKind::Validation, "limits: a must lie on the boundary");
    const Point normal = proj.normal;
    const auto ts = numbers(params, "ts");
    const auto radii = numbers(params, "radii");
    const int count = integer(params, "directions");
    require(count > 0 && ts.size() >= 2 && radii.size() >= 2, ErrorKind::Validation,
            "limits: need directions > 0, two or more ts and radii");
    const double tol = num(params, "tol");

    const auto fan = plap::verify::direction_fan(normal, count);
    const auto est = plap::verify::boundary_limit(u, a, normal, fan, ts);
    double worst = 0.0;
    json rows = json::array();
    for (const auto& e : est) {
        worst = std::max(worst, e.error);
        rows.push_back({{"direction", plap::json_util::from_point(e.direction)},
                        {"estimate", e.estimate},
                        {"expected", e.expected},
                        {"error", e.error}});
    }
    // Blow-up of the odd extension over a full circle of directions.
    std::vector<Point> ys;
    if (u.dimension() == 2) {
        for (int i = 0; i < count; ++i) {
            const double t = 2.0 * std::numbers::pi * (i + 0.5) / count;
            Point y(2);
            y << std::cos(t), std::sin(t);
            ys.push_back(y);
        }
    } else {
        for (const auto& d : fan) {
            ys.push_back(d);
            ys.push_back(-d);
        }
    }
    const auto ext = plap::fields::extend_field(u, g);
    const auto blow = plap::verify::blowup_convergence(ext, a, normal, ys, radii);
    const bool pass = worst <= tol;
    const json summary = {{"fan", rows},
                          {"max_error", worst},
                          {"tol", tol},
                          {"blowup", {{"radii", blow.radii}, {"errors", blow.errors}, {"slope", blow.slope}}},
                          {"pass", pass}};
    write_json(cfg, "limits.json", summary);
    print_summary(summary, "boundary limit max error " + fmt17(worst) + ", blow-up slope " + fmt17(blow.slope) +
                               " -> " + pass_word(pass));
    return pass ? 0 : 4;
}

int cmd_reflectcheck(const plap::io::RunConfig& cfg)
{
    const json& params = cfg.params;
    const auto g = plap::geometry::DomainGeometry::from_json(params.at("geometry"));
    require(g.dimension() == 2, ErrorKind::Validation, "reflectcheck: planar geometries only");
    const int count = integer(params, "samples");
    const double band = num(params, "band");
    require(count > 0 && band > 0.0 && band <= g.tube_radius(), ErrorKind::Validation,
            "reflectcheck: need samples > 0 and 0 < band <= tube radius");
    const auto ps = numbers(params, "p");
    plap::io::Random rng(cfg.seed);
    // Tube samples: boundary point by arclength parameter, then offset along the normal.
    std::vector<Point> xs;
    int guard = 0;
    while (static_cast<int>(xs.size()) < count) {
        require(++guard <= 1000 * count, ErrorKind::Verification, "reflectcheck: could not place tube samples");
        Point x(2);
        const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double rho = rng.uniform(-band, band);
        x << 3.0 * std::cos(t), 3.0 * std::sin(t);
        // Pull toward the boundary from a far point, then offset.
        const auto pr = plap::geometry::project(g, x);
        if (pr.at_corner) {
            continue;
        }
        Point y = pr.point + rho * pr.normal;
        try {
            (void)plap::geometry::reflect(g, y);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::OutOfTube) {
                continue;
            }
            throw;
        }
        xs.push_back(y);
    }
    std::vector<Point> etas, xis;
    for (int i = 0; i < 8; ++i) {
        const double t = 2.0 * std::numbers::pi * (i + 0.25) / 8.0;
        Point v(2);
        v << std::cos(t), std::sin(t);
        etas.push_back((0.5 + 0.25 * i) * v);
        xis.push_back(v);
    }
    json rows = json::array();
    bool all = true;
    std::string text;
    for (const double p : ps) {
        require(p > 1.0, ErrorKind::Validation, "reflectcheck: p must exceed 1");
        const auto chk = plap::verify::reflection_check(g, p, xs, etas, xis);
        rows.push_back(chk.to_json());
        all = all && chk.pass;
        text += "p=" + fmt17(p) + " lower=" + fmt17(chk.ellipticity.lower) + " required=" + fmt17(chk.required_lower) +
                " boundary_dev=" + fmt17(chk.max_boundary_deviation) + " -> " + pass_word(chk.pass) + "\n";
    }
    const json summary = {{"samples", count}, {"band", band}, {"checks", rows}, {"pass", all}};
    write_json(cfg, "reflect.json", summary);
    print_summary(summary, text.substr(0, text.size() - 1));
    return all ? 0 : 4;
}

plap::solver::SolverOptions solver_options(const json& params)
{
    plap::solver::SolverOptions opts;
    opts.tol = num(params, "tol");
    require(opts.tol > 0.0, ErrorKind::Validation, "--tol must be positive");
    return opts;
}

int cmd_solve(const plap::io::RunConfig& cfg)
{
    const json& params = cfg.params;
    require_positive(params, {"h", "radius", "angle", "p"});
    require(!params.at("data").is_null(), ErrorKind::Validation, "solve: --data field descriptor is required");
    const double p = num(params, "p");
    require(p > 1.0, ErrorKind::Validation, "solve: p must exceed 1");
    const auto data = plap::fields::make_field(params.at("data"));
    require(data.dimension() == 2, ErrorKind::Validation, "solve: boundary data must be a planar field");
    auto eval = [&](const plap::solver::Vec2& x) {
        Point y(2);
        y << x[0], x[1];
        return data.value(y);
    };
    auto mesh = build_mesh(params);
    std::vector<plap::solver::BoundaryRule> rules;
    for (const char* tag : {"outer", "inner-arc", "ray0", "ray1", "arc"}) {
        rules.emplace_back(tag, eval);
    }
    const auto prob = plap::solver::make_problem(std::move(mesh), p, rules);
    const auto sol = plap::solver::solve_dirichlet(prob, solver_options(params));
    // Deviation from the data field at the nodes (its error when the field is p-harmonic).
    double dev = 0.0, sup = 0.0;
    for (std::size_t v = 0; v < prob.mesh.node_count(); ++v) {
        const double ref = eval(prob.mesh.vertices[v]);
        sup = std::max(sup, std::abs(ref));
        dev = std::max(dev, std::abs(sol.values[v] - ref));
    }
    write_json(cfg, "mesh.json", prob.mesh.to_json());
    write_csv(cfg, "solution.csv", plap::solver::solution_csv(prob.mesh, sol.values));
    write_json(cfg, "solve_log.json", json{{"log", sol.log_json()}});
    const json summary = {{"nodes", prob.mesh.node_count()},
                          {"energy", sol.energy},
                          {"initial_energy", sol.initial_energy},
                          {"iterations", sol.iterations},
                          {"outer_iterations", sol.outer_iterations},
                          {"gradient_fallbacks", sol.gradient_fallbacks},
                          {"residual_norm", sol.residual_norm},
                          {"data_deviation", dev},
                          {"data_relative_deviation", sup > 0.0 ? dev / sup : dev},
                          {"kernels", plap::kernels::isa_name(plap::kernels::active_isa())}};
    write_json(cfg, "solve.json", summary);
    print_summary(summary, "nodes=" + std::to_string(prob.mesh.node_count()) + " iterations=" +
                               std::to_string(sol.iterations) + " residual=" + fmt17(sol.residual_norm) +
                               " relative deviation from data field=" + fmt17(sup > 0.0 ? dev / sup : dev));
    return 0;
}

int cmd_fundamental(const plap::io::RunConfig& cfg)
{
    const json& params = cfg.params;
    plap::solver::FundamentalOptions opts;
    opts.radius = num(params, "radius");
    opts.center = vec2_of(params, "center");
    opts.a = vec2_of(params, "a");
    opts.schedule = numbers(params, "eps");
    opts.h = num(params, "h");
    opts.solver = solver_options(params);
    const auto res = plap::solver::fundamental_solution(opts);
    for (std::size_t i = 0; i < res.solutions.size(); ++i) {
        write_csv(cfg, "solution_eps" + std::to_string(i) + ".csv",
                  plap::solver::solution_csv(res.meshes[i], res.solutions[i].values));
        write_json(cfg, "mesh_eps" + std::to_string(i) + ".json", res.meshes[i].to_json());
    }
    if (!res.extrapolated.empty()) {
        write_csv(cfg, "extrapolated.csv",
                  plap::solver::solution_csv(res.meshes[res.meshes.size() - 2], res.extrapolated));
    }
    json report = res.report();
    write_json(cfg, "fundamental.json", report);
    print_summary(report, "monotone=" + std::string(res.monotone() ? "yes" : "no") +
                              " sandwiched=" + (res.sandwiched() ? "yes" : "no") +
                              " error(finest)=" + fmt17(res.error_finest) +
                              (res.extrapolated.empty() ? std::string()
                                                        : " error(extrapolated)=" + fmt17(res.error_extrapolated)));
    return res.monotone() && res.sandwiched() ? 0 : 4;
}

/// Reads a CSV written by the solver (`node,x,y,value`, optional comment line).
std::vector<double> read_solution_csv(const std::string& path)
{
    std::stringstream in(plap::io::read_file(path));
    std::string line;
    std::vector<double> values;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            require(line == "node,x,y,value", ErrorKind::Validation, "render: unexpected solution header in " + path);
            header = true;
            continue;
        }
        const auto pos = line.rfind(',');
        values.push_back(std::stod(line.substr(pos + 1)));
    }
    return values;
}

plap::solver::Mesh2D read_mesh_json(const std::string& path)
{
    json j;
    try {
        j = json::parse(plap::io::read_file(path));
    } catch (const json::exception&) {
        fail(ErrorKind::Validation, "render: " + path + " is not valid JSON");
    }
    plap::solver::Mesh2D mesh;
    for (const auto& v : j.at("vertices")) {
        mesh.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    }
    for (const auto& t : j.at("triangles")) {
        mesh.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    }
    mesh.base_index.resize(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.base_index.size(); ++i) {
        mesh.base_index[i] = static_cast<int>(i);
    }
    mesh.rebuild_adjacency();
    return mesh;
}

int cmd_render(const plap::io::RunConfig& cfg)
{
    const json& params = cfg.params;
    const auto win = numbers(params, "window");
    require(win.size() == 4, ErrorKind::Validation, "render: --window needs xmin,xmax,ymin,ymax");
    plap::io::RenderWindow w;
    w.xmin = win[0];
    w.xmax = win[1];
    w.ymin = win[2];
    w.ymax = win[3];
    w.width = w.height = integer(params, "pixels");
    require(w.width > 0 && w.width <= 4000, ErrorKind::Validation, "render: --pixels must lie in 1..4000");

    std::optional<plap::geometry::DomainGeometry> g;
    if (!params.at("geometry").is_null()) {
        g = plap::geometry::DomainGeometry::from_json(params.at("geometry"));
        require(g->dimension() == 2, ErrorKind::Validation, "render: 2D input only");
    }
    std::function<double(double, double)> f;
    std::string title;
    std::optional<plap::fields::ScalarField> field;
    plap::solver::Mesh2D mesh;
    std::vector<double> values;
    if (!params.at("field").is_null()) {
        require(params.at("mesh").is_null() && params.at("solution").is_null(), ErrorKind::Validation,
                "render: give either --field or --mesh/--solution");
        field = plap::fields::make_field(params.at("field"));
        require(field->dimension() == 2, ErrorKind::Validation, "render: 2D input only");
        title = field->description();
        f = [&](double x, double y) {
            Point pt(2);
            pt << x, y;
            if (g && !plap::geometry::contains(*g, pt)) {
                return std::numeric_limits<double>::quiet_NaN();
            }
            try {
                return field->value(pt);
            } catch (const Error&) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        };
    } else {
        require(!params.at("mesh").is_null() && !params.at("solution").is_null(), ErrorKind::Validation,
                "render: need --field, or both --mesh and --solution");
        mesh = read_mesh_json(params.at("mesh").get<std::string>());
        values = read_solution_csv(params.at("solution").get<std::string>());
        require(values.size() == mesh.node_count(), ErrorKind::Validation, "render: solution and mesh sizes differ");
        title = "P1 solution";
        f = [&](double x, double y) {
            try {
                return plap::solver::interpolate(mesh, values, {x, y}).value;
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::Location) {
                    return std::numeric_limits<double>::quiet_NaN();
                }
                throw;
            }
        };
    }
    const std::string svg = plap::io::render_svg(f, w, cfg, title);
    plap::io::write_file(g_output.path("render.svg"), svg);
    const json summary = {{"file", "render.svg"}, {"pixels", w.width}, {"path_hash", cfg.hash()}};
    print_summary(summary, "wrote render.svg");
    return 0;
}

// ---------------------------------------------------------------------------

const json kUnitDisk = {{"kind", "unit-disk"}};

std::vector<Command> commands()
{
    const double pi = std::numbers::pi;
    return {
        {"beta", "Separable exponents beta_k: closed form against shooting",
         {{"p", Type::Number, 2.0, "exponent p > 1"}, {"k", Type::IntRange, json::array({1, 4}), "mode or range a..b"}},
         cmd_beta},
        {"omega", "Tabulate the angular profile omega_k",
         {{"p", Type::Number, 2.0, "exponent p > 1"},
          {"k", Type::Integer, 1, "mode k >= 1"},
          {"m", Type::Integer, 512, "intervals on [0, pi/k]"}},
         cmd_omega},
        {"assemble", "Generate a disk or sector mesh (mesh.json)",
         {{"domain", Type::Text, "disk", "disk or sector"},
          {"radius", Type::Number, 1.0, "radius"},
          {"a", Type::NumberList, nullptr, "grading point on the circle, x,y"},
          {"epsilon", Type::Number, nullptr, "puncture radius around a"},
          {"h", Type::Number, 0.1, "target mesh size"},
          {"angle", Type::Number, pi / 2.0, "sector angle"}},
         cmd_assemble},
        {"residual", "Strong-form p-Laplace residual sweep for a field descriptor",
         {{"field", Type::Json, nullptr, "field descriptor JSON (or @file)"},
          {"p", Type::Number, nullptr, "exponent (default: declared by the field)"},
          {"samples", Type::Integer, 100, "number of admissible samples"},
          {"h", Type::Number, 1e-3, "finite-difference step"},
          {"radius", Type::Number, 2.0, "sampling ball radius"},
          {"center", Type::NumberList, nullptr, "sampling ball centre"},
          {"min_distance", Type::Number, 0.5, "minimum distance to singular sets"}},
         cmd_residual},
        {"spherical", "Residual of the 3D spherical reduction at random angles",
         {{"p", Type::Number, 2.0, "exponent"},
          {"k", Type::Integer, 1, "mode"},
          {"samples", Type::Integer, 50, "sample angles"},
          {"h", Type::Number, 1e-3, "finite-difference step"}},
         cmd_spherical},
        {"limits", "Boundary limit over a direction fan and blow-up convergence",
         {{"field", Type::Json, json{{"type", "ball_interior"}, {"a", {1.0, 0.0}}}, "field descriptor"},
          {"geometry", Type::Json, kUnitDisk, "geometry descriptor"},
          {"a", Type::NumberList, json::array({1.0, 0.0}), "boundary point"},
          {"directions", Type::Integer, 32, "fan size"},
          {"ts", Type::NumberList, json::array({2e-3, 1e-3}), "distances for the extrapolated limit"},
          {"radii", Type::NumberList, json::array({0.1, 0.05, 0.025}), "blow-up radii"},
          {"tol", Type::Number, 1e-3, "limit tolerance"}},
         cmd_limits},
        {"reflectcheck", "Transformed-coefficient checks in the tubular neighbourhood",
         {{"geometry", Type::Json, kUnitDisk, "planar geometry descriptor"},
          {"p", Type::NumberList, json::array({1.5, 2.0, 3.0}), "exponents"},
          {"samples", Type::Integer, 200, "tube samples"},
          {"band", Type::Number, 0.1, "half-width of the sampled band"}},
         cmd_reflectcheck},
        {"solve", "P1 p-Laplace Dirichlet solve with data from a field descriptor",
         {{"domain", Type::Text, "sector", "disk or sector"},
          {"radius", Type::Number, 1.0, "radius"},
          {"angle", Type::Number, pi / 2.0, "sector angle"},
          {"a", Type::NumberList, nullptr, "grading point on the circle"},
          {"epsilon", Type::Number, nullptr, "puncture radius around a"},
          {"h", Type::Number, 0.05, "target mesh size"},
          {"p", Type::Number, 4.0, "exponent"},
          {"data", Type::Json, nullptr, "boundary data field descriptor"},
          {"tol", Type::Number, 1e-10, "projected gradient tolerance"}},
         cmd_solve},
        {"fundamental", "Epsilon-exhaustion construction of the singular solution on a disk",
         {{"radius", Type::Number, 1.0, "disk radius"},
          {"center", Type::NumberList, json::array({0.0, 0.0}), "disk centre"},
          {"a", Type::NumberList, json::array({1.0, 0.0}), "boundary point"},
          {"eps", Type::NumberList, json::array({0.4, 0.2, 0.1, 0.05}), "decreasing puncture radii"},
          {"h", Type::Number, 0.02, "target mesh size"},
          {"tol", Type::Number, 1e-10, "projected gradient tolerance"}},
         cmd_fundamental},
        {"render", "Filled contour SVG of a field or a P1 solution",
         {{"field", Type::Json, nullptr, "field descriptor"},
          {"mesh", Type::Text, nullptr, "mesh JSON path"},
          {"solution", Type::Text, nullptr, "solution CSV path"},
          {"geometry", Type::Json, nullptr, "mask: only points inside are drawn"},
          {"window", Type::NumberList, json::array({-1.1, 1.1, -1.1, 1.1}), "xmin,xmax,ymin,ymax"},
          {"pixels", Type::Integer, 220, "image width and height"}},
         cmd_render},
    };
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"plap: p-harmonic functions, singular solutions and their numerical verification"};
    app.set_version_flag("--version", std::string(plap::kVersion));
    // Several commands take --h (mesh or stencil size), so help is long-form only.
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool json_flag = false;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized sampling");
    app.add_flag("--json", json_flag, "print the summary as JSON");

    const auto cmds = commands();
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, std::string> config_path;
    for (const auto& c : cmds) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->fallthrough();
        for (const auto& o : c.options) {
            sub->add_option("--" + o.name, raw[c.name][o.name], o.help);
        }
        sub->add_option("--config", config_path[c.name], "JSON file {command, params, seed}");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const Command* cmd = nullptr;
        CLI::App* sub = nullptr;
        for (const auto& c : cmds) {
            if (app.got_subcommand(c.name)) {
                cmd = &c;
                sub = app.get_subcommand(c.name);
            }
        }
        plap::io::RunConfig cfg;
        cfg.command = cmd->name;
        cfg.seed = seed;
        for (const auto& o : cmd->options) {
            cfg.params[o.name] = o.fallback;
        }
        if (!config_path[cmd->name].empty()) {
            json file;
            try {
                file = json::parse(plap::io::read_file(config_path[cmd->name]));
            } catch (const json::exception&) {
                fail(ErrorKind::Validation, "config: not valid JSON");
            }
            plap::json_util::check_keys(file, {"command", "params", "seed"}, "config");
            if (file.contains("command")) {
                require(file.at("command") == cmd->name, ErrorKind::Validation, "config: command mismatch");
            }
            if (file.contains("seed")) {
                require(file.at("seed").is_number_unsigned(), ErrorKind::Validation, "config: seed must be unsigned");
                cfg.seed = file.at("seed").get<std::uint64_t>();
            }
            if (file.contains("params")) {
                require(file.at("params").is_object(), ErrorKind::Validation, "config: params must be an object");
                for (const auto& [key, value] : file.at("params").items()) {
                    const auto it = std::find_if(cmd->options.begin(), cmd->options.end(),
                                                 [&](const OptSpec& o) { return o.name == key; });
                    require(it != cmd->options.end(), ErrorKind::Validation, "config: unknown parameter '" + key + "'");
                    check_type(*it, value);
                    cfg.params[key] = canonical(*it, value);
                }
            }
        }
        for (const auto& o : cmd->options) {
            if (sub->count("--" + o.name) > 0) {
                cfg.params[o.name] = parse_value(o, raw[cmd->name][o.name]);
            }
        }
        if (app.count("--seed") > 0) {
            cfg.seed = seed;
        }
        g_output.dir = out_dir;
        g_output.json_stdout = json_flag;
        std::filesystem::create_directories(out_dir);
        return cmd->run(cfg);
    } catch (const Error& e) {
        std::cerr << "error (" << plap::to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const json::exception& e) {
        std::cerr << "error (validation): " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error (validation): " << e.what() << "\n";
        return 2;
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plap/fields.hpp"
#include "plap/io.hpp"
#include "plap/mesh.hpp"
#include "plap/solver.hpp"
#include "plap/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace plap;
using namespace plap::solver;

namespace {

constexpr double pi = std::numbers::pi;

bool throws_kind(const std::function<void()>& f, ErrorKind kind)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

// Relative nodal sup error against separable_2d(p, 2) on the quarter sector.
double manufactured_error(double p, double h)
{
    const auto exact = fields::separable_2d(
        spectral::tabulate(p, 2, fields::kDefaultProfileNodes, fields::profile_tolerances()));
    auto data = [&](const Vec2& x) {
        Point y(2);
        y << x[0], x[1];
        return exact.value(y);
    };
    const auto prob = make_problem(mesh_sector(pi / 2, 1.0, h), p, {{"ray0", data}, {"ray1", data}, {"arc", data}});
    const auto sol = solve_dirichlet(prob);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < prob.mesh.node_count(); ++i) {
        err = std::max(err, std::abs(sol.values[i] - data(prob.mesh.vertices[i])));
        scale = std::max(scale, std::abs(data(prob.mesh.vertices[i])));
    }
    return err / scale;
}

}  // namespace

TEST_CASE("constant data gives the constant solution without Newton steps")
{
    const auto prob = make_problem(mesh_disk(1.0, {1.0, 0.0}, std::nullopt, 0.2), 3.0,
                                   {{"outer", [](const Vec2&) { return 2.5; }}});
    const auto sol = solve_dirichlet(prob);
    for (double v : sol.values) {
        CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
    }
    CHECK(sol.outer_iterations == 1);
    CHECK(sol.iterations == 0);
    CHECK(sol.energy == doctest::Approx(0.0));
}

TEST_CASE("affine data is reproduced for every p")
{
    // affine functions are p-harmonic and P1 exact, so the discrete minimiser is the interpolant
    auto affine = [](const Vec2& x) { return 0.3 + 1.7 * x[0] - 0.6 * x[1]; };
    for (double p : {2.0, 3.0, 1.5}) {
        const auto prob = make_problem(mesh_disk(1.0, {1.0, 0.0}, std::nullopt, 0.1), p, {{"outer", affine}});
        const auto sol = solve_dirichlet(prob);
        double err = 0.0;
        for (std::size_t i = 0; i < prob.mesh.node_count(); ++i) {
            err = std::max(err, std::abs(sol.values[i] - affine(prob.mesh.vertices[i])));
        }
        CAPTURE(p);
        CHECK(err <= (p == 2.0 ? 1e-10 : 1e-7));
    }
}

TEST_CASE("energy decreases within each stage and the final gradient meets tol")
{
    auto data = [](const Vec2& x) { return std::sin(3.0 * x[0]) + x[1] * x[1]; };
    const auto prob = make_problem(mesh_disk(1.0, {1.0, 0.0}, std::nullopt, 0.1), 4.0, {{"outer", data}});
    const auto sol = solve_dirichlet(prob);
    CHECK(sol.residual_norm <= 1e-10);
    CHECK(projected_gradient_norm(prob, sol.values, 0.0) <= 1e-10);
    CHECK(sol.energy <= sol.initial_energy);
    CHECK(discrete_energy(prob, sol.values, 0.0) == doctest::Approx(sol.energy).epsilon(1e-12));
    for (std::size_t i = 1; i < sol.log.size(); ++i) {
        if (sol.log[i].delta == sol.log[i - 1].delta) {
            CHECK(sol.log[i].energy <= sol.log[i - 1].energy + 1e-12 * std::abs(sol.log[i - 1].energy));
        }
    }
    // minimiser: perturbing a free node raises the energy
    auto u = sol.values;
    const auto bnd = prob.mesh.boundary_nodes();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (std::find(bnd.begin(), bnd.end(), static_cast<int>(i)) == bnd.end()) {
            u[i] += 1e-3;
            break;
        }
    }
    CHECK(discrete_energy(prob, u, 0.0) > sol.energy);
    CHECK(sol.log_json().is_array());
}

TEST_CASE("discrete comparison principle")
{
    const auto mesh = mesh_disk(1.0, {1.0, 0.0}, std::nullopt, 0.1);
    auto g1 = [](const Vec2& x) { return std::cos(2.0 * x[0]) * x[1]; };
    auto g2 = [&](const Vec2& x) { return g1(x) + 0.1 + 0.1 * x[0] * x[0]; };
    for (double p : {2.0, 3.0}) {
        const auto s1 = solve_dirichlet(make_problem(mesh, p, {{"outer", g1}}));
        const auto s2 = solve_dirichlet(make_problem(mesh, p, {{"outer", g2}}));
        double worst = -1e300;
        for (std::size_t i = 0; i < s1.values.size(); ++i) {
            worst = std::max(worst, s1.values[i] - s2.values[i]);
        }
        CAPTURE(p);
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("manufactured convergence on the sector")
{
    for (double p : {2.0, 3.0, 4.0}) {
        const double e1 = manufactured_error(p, 0.05);
        const double e2 = manufactured_error(p, 0.025);
        CAPTURE(p);
        CHECK(e1 <= 0.02);
        CHECK(e1 / e2 >= 1.5);
    }
}

TEST_CASE("repeated solves are bitwise identical")
{
    auto data = [](const Vec2& x) { return x[0] * x[1]; };
    const auto prob = make_problem(mesh_sector(pi / 2, 1.0, 0.1), 3.0, {{"ray0", data}, {"ray1", data}, {"arc", data}});
    const auto sol = solve_dirichlet(prob);
    CHECK(std::isfinite(sol.energy));
    const auto again = solve_dirichlet(prob);
    CHECK(max_abs_diff(sol.values, again.values) == 0.0);
}

TEST_CASE("problem validation")
{
    const auto mesh = mesh_sector(pi / 2, 1.0, 0.2);
    auto zero = [](const Vec2&) { return 0.0; };
    CHECK(throws_kind([&] { (void)make_problem(mesh, 2.0, {{"arc", zero}}); }, ErrorKind::Validation));
    CHECK(throws_kind([&] { (void)solve_dirichlet(make_problem(mesh, 1.0, {{"ray0", zero}, {"ray1", zero}, {"arc", zero}})); },
                      ErrorKind::Validation));
    auto prob = make_problem(mesh, 2.0, {{"ray0", zero}, {"ray1", zero}, {"arc", zero}});
    prob.dirichlet_nodes.push_back(prob.dirichlet_nodes.front());
    prob.dirichlet_values.push_back(0.0);
    CHECK(throws_kind([&] { prob.validate(); }, ErrorKind::Validation));
    auto bad = make_problem(mesh, 2.0, {{"ray0", zero}, {"ray1", zero}, {"arc", zero}});
    SolverOptions o;
    o.schedule = {1e-2, 1e-3};
    CHECK(throws_kind([&] { (void)solve_dirichlet(bad, o); }, ErrorKind::Validation));
}

TEST_CASE("solution csv")
{
    const auto mesh = mesh_sector(pi / 2, 1.0, 0.5);
    std::vector<double> v(mesh.node_count(), 0.25);
    const auto csv = solution_csv(mesh, v);
    CHECK(csv.rfind("node,x,y,value\n0,", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == mesh.node_count() + 1);
}

TEST_CASE("disk singular solution formula")
{
    const Vec2 c{0.0, 0.0}, a{1.0, 0.0};
    CHECK(disk_singular_solution({0.0, 0.0}, c, 1.0, a) == doctest::Approx(0.5));
    CHECK(disk_singular_solution({0.0, 1.0}, c, 1.0, a) == doctest::Approx(0.0));
    // scaling: U_R(R y) = U_1(y) / R
    CHECK(disk_singular_solution({0.6, 0.4}, c, 2.0, {2.0, 0.0}) ==
          doctest::Approx(disk_singular_solution({0.3, 0.2}, c, 1.0, a) / 2.0));
}

TEST_CASE("fundamental scheme: monotone, sandwiched, extrapolation improves")
{
    FundamentalOptions o;
    o.h = 0.05;
    const auto r = fundamental_solution(o);
    CHECK(r.solutions.size() == 4);
    CHECK(r.monotonicity.size() == 3);
    CHECK(r.monotone());
    CHECK(r.sandwiched());
    for (const auto& row : r.sandwich) {
        CHECK(row.checked > 0);
    }
    CHECK(r.compared_nodes > 0);
    CHECK(r.error_extrapolated < r.error_finest);
    // the finest error is the harmonic measure of the hole, about (4/pi) eps
    CHECK(r.error_finest == doctest::Approx(4.0 / pi * 0.05).epsilon(0.15));
    CHECK(r.report().contains("monotonicity"));
}

TEST_CASE("fundamental scheme: the limit scales like 1/R")
{
    FundamentalOptions o1;
    o1.h = 0.05;
    o1.schedule = {0.4, 0.2, 0.1};
    FundamentalOptions o2 = o1;
    o2.radius = 2.0;
    o2.a = {2.0, 0.0};
    o2.h = 0.1;
    o2.schedule = {0.8, 0.4, 0.2};
    const auto r1 = fundamental_solution(o1);
    const auto r2 = fundamental_solution(o2);
    const auto& m1 = r1.meshes[r1.meshes.size() - 2];
    const auto& m2 = r2.meshes[r2.meshes.size() - 2];
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < m1.node_count(); ++i) {
        const Vec2 y = m1.vertices[i];
        // stay inside both inscribed polygons
        if (std::hypot(y[0] - 1.0, y[1]) < 0.3 || std::hypot(y[0], y[1]) > 0.95) {
            continue;
        }
        const double u2 = interpolate(m2, r2.extrapolated, {2.0 * y[0], 2.0 * y[1]}).value;
        err = std::max(err, std::abs(2.0 * u2 - r1.extrapolated[i]));
        scale = std::max(scale, std::abs(r1.extrapolated[i]));
    }
    CHECK(err / scale <= 2e-2);
}

TEST_CASE("fundamental scheme: single epsilon and validation")
{
    FundamentalOptions o;
    o.h = 0.1;
    o.schedule = {0.2};
    const auto r = fundamental_solution(o);
    CHECK(r.monotonicity.empty());
    CHECK(r.extrapolated.empty());
    FundamentalOptions bad = o;
    bad.a = {0.5, 0.0};
    CHECK(throws_kind([&] { (void)fundamental_solution(bad); }, ErrorKind::Validation));
    bad = o;
    bad.schedule = {0.1, 0.2};
    CHECK(throws_kind([&] { (void)fundamental_solution(bad); }, ErrorKind::Validation));
    bad = o;
    bad.p = 3.0;
    CHECK(throws_kind([&] { (void)fundamental_solution(bad); }, ErrorKind::Validation));
}

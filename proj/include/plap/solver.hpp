#pragma once

#include "plap/core.hpp"
#include "plap/mesh.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace plap::solver {

/// Dirichlet problem for the P1 p-Laplacian. Every boundary node must appear
/// exactly once in `dirichlet_nodes`; interior nodes may also be fixed.
struct DirichletProblem {
    Mesh2D mesh;
    double p = 2.0;
    std::vector<int> dirichlet_nodes;
    std::vector<double> dirichlet_values;

    void validate() const;
};

/// Boundary data rule: a tag and the value it prescribes at a node position.
using BoundaryRule = std::pair<std::string, std::function<double(const Vec2&)>>;

/// Fixes every boundary node with the first rule (in list order) whose tag
/// appears on one of the node's boundary edges. Throws Validation when a
/// boundary node matches no rule.
DirichletProblem make_problem(Mesh2D mesh, double p, const std::vector<BoundaryRule>& rules);

struct SolverOptions {
    double tol = 1e-10;                             // projected gradient, max norm, at delta = 0
    std::vector<double> schedule{1e-2, 1e-4, 1e-8, 0.0};
    double stage_tol = 1e-8;                        // for the delta > 0 stages
    int max_newton = 200;                           // per stage
};

struct LogEntry {
    int iter = 0;
    double energy = 0.0;
    double grad_norm = 0.0;
    double delta = 0.0;
    bool gradient_step = false;
};

struct DiscreteSolution {
    std::vector<double> values;
    double energy = 0.0;          // at delta = 0
    double initial_energy = 0.0;  // of the initial iterate, at delta = 0
    int iterations = 0;           // accepted Newton or gradient steps
    int outer_iterations = 0;     // schedule stages entered
    int gradient_fallbacks = 0;
    double residual_norm = 0.0;   // projected gradient at delta = 0
    std::vector<LogEntry> log;

    [[nodiscard]] nlohmann::json log_json() const;
};

/// Minimises sum_T area (|grad u|^2 + delta^2)^{p/2} / p over P1 fields with
/// the prescribed values, annealing delta through the schedule. Starts from
/// the p = 2 solution. Throws LineSearch or Solver on failure.
DiscreteSolution solve_dirichlet(const DirichletProblem& prob, const SolverOptions& opts = {});

/// Discrete energy at the given delta.
double discrete_energy(const DirichletProblem& prob, const std::vector<double>& u, double delta);

/// Max-norm of the energy gradient over free nodes at the given delta.
double projected_gradient_norm(const DirichletProblem& prob, const std::vector<double>& u, double delta);

/// CSV `node,x,y,value` with 17 significant digits.
std::string solution_csv(const Mesh2D& mesh, const std::vector<double>& values);

struct FundamentalOptions {
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
    Vec2 a{1.0, 0.0};
    std::vector<double> schedule{0.4, 0.2, 0.1, 0.05};
    double h = 0.02;
    double p = 2.0;
    double monotonicity_tol = 1e-8;
    double compare_min_distance = 0.3;  // oracle comparison on |x - a| >= this
    double sandwich_tol = 1e-8;
    SolverOptions solver;

    void validate() const;
};

struct MonotonicityRow {
    double eps_coarse = 0.0;
    double eps_fine = 0.0;
    int shared_nodes = 0;
    double max_increase = 0.0;  // max over shared nodes of u_fine - u_coarse
    bool pass = false;
};

struct SandwichRow {
    double epsilon = 0.0;
    int checked = 0;
    double worst_lower = 0.0;  // max of V^i - u
    double worst_upper = 0.0;  // max of u - V^e
    bool pass = false;
};

struct FundamentalResult {
    std::vector<double> schedule;
    std::vector<Mesh2D> meshes;
    std::vector<DiscreteSolution> solutions;
    std::vector<MonotonicityRow> monotonicity;
    std::vector<SandwichRow> sandwich;
    /// Linear-in-epsilon extrapolation from the two finest solutions, on the
    /// nodes of the second finest mesh (empty for a single epsilon).
    std::vector<double> extrapolated;
    /// Sup error relative to the sup of the oracle on the comparison set.
    double error_finest = 0.0;
    double error_extrapolated = 0.0;
    int compared_nodes = 0;

    [[nodiscard]] bool monotone() const;
    [[nodiscard]] bool sandwiched() const;
    [[nodiscard]] nlohmann::json report() const;
};

/// Oracle for the unit-normalised singular solution of the disk:
/// (R^2 - |x-c|^2) / (2 R |x-a|^2).
double disk_singular_solution(const Vec2& x, const Vec2& center, double radius, const Vec2& a);

/// Exhaustion scheme: for each epsilon solves the problem on the disk minus
/// B_eps(a) with V^e data on the inner arc and 0 on the outer circle, on
/// nested meshes cut from one base mesh.
FundamentalResult fundamental_solution(const FundamentalOptions& opts);

}  // namespace plap::solver

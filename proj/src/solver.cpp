#include "plap/solver.hpp"

#include "plap/kernels.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace plap::solver {

namespace {

/// Compensated (Neumaier) summation.
class Sum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            c_ += (sum_ - t) + x;
        } else {
            c_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + c_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

/// Element data, free-node numbering and the Hessian sparsity pattern,
/// computed once per problem.
class Assembly {
public:
    explicit Assembly(const DirichletProblem& prob) : prob_(prob)
    {
        const Mesh2D& mesh = prob.mesh;
        const std::size_t nt = mesh.triangles.size();
        auto& b = batch_;
        for (auto* v : {&b.area, &b.bx0, &b.bx1, &b.bx2, &b.by0, &b.by1, &b.by2}) {
            v->resize(nt);
        }
        b.i0.resize(nt);
        b.i1.resize(nt);
        b.i2.resize(nt);
        for (std::size_t t = 0; t < nt; ++t) {
            const auto& tri = mesh.triangles[t];
            const Vec2& p0 = mesh.vertices[static_cast<std::size_t>(tri[0])];
            const Vec2& p1 = mesh.vertices[static_cast<std::size_t>(tri[1])];
            const Vec2& p2 = mesh.vertices[static_cast<std::size_t>(tri[2])];
            const double area2 = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]);
            b.i0[t] = tri[0];
            b.i1[t] = tri[1];
            b.i2[t] = tri[2];
            b.area[t] = 0.5 * area2;
            b.bx0[t] = (p1[1] - p2[1]) / area2;
            b.by0[t] = (p2[0] - p1[0]) / area2;
            b.bx1[t] = (p2[1] - p0[1]) / area2;
            b.by1[t] = (p0[0] - p2[0]) / area2;
            b.bx2[t] = (p0[1] - p1[1]) / area2;
            b.by2[t] = (p1[0] - p0[0]) / area2;
        }

        free_id_.assign(mesh.node_count(), 0);
        for (const int v : prob.dirichlet_nodes) {
            free_id_[static_cast<std::size_t>(v)] = -1;
        }
        for (std::size_t v = 0; v < free_id_.size(); ++v) {
            if (free_id_[v] == 0) {
                free_id_[v] = static_cast<int>(free_nodes_.size());
                free_nodes_.push_back(static_cast<int>(v));
            }
        }

        // Lower-triangular pattern and, per element, the value slot of each local entry.
        const auto nf = static_cast<Eigen::Index>(free_nodes_.size());
        std::vector<Eigen::Triplet<double>> trips;
        for (std::size_t t = 0; t < nt; ++t) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    const int r = free_id_[static_cast<std::size_t>(node(t, i))];
                    const int c = free_id_[static_cast<std::size_t>(node(t, j))];
                    if (r >= 0 && c >= 0 && r >= c) {
                        trips.emplace_back(r, c, 1.0);
                    }
                }
            }
        }
        hessian_.resize(nf, nf);
        hessian_.setFromTriplets(trips.begin(), trips.end());
        hessian_.makeCompressed();
        slot_.assign(nt * 9, -1);
        for (std::size_t t = 0; t < nt; ++t) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    const int r = free_id_[static_cast<std::size_t>(node(t, i))];
                    const int c = free_id_[static_cast<std::size_t>(node(t, j))];
                    if (r < 0 || c < 0 || r < c) {
                        continue;
                    }
                    const auto* begin = hessian_.innerIndexPtr() + hessian_.outerIndexPtr()[c];
                    const auto* end = hessian_.innerIndexPtr() + hessian_.outerIndexPtr()[c + 1];
                    const auto* it = std::lower_bound(begin, end, r);
                    slot_[t * 9 + static_cast<std::size_t>(i * 3 + j)] =
                        static_cast<int>(it - hessian_.innerIndexPtr());
                }
            }
        }
        if (nf > 0) {
            ldlt_.analyzePattern(hessian_);
        }
    }

    [[nodiscard]] std::size_t free_count() const { return free_nodes_.size(); }
    [[nodiscard]] const std::vector<int>& free_nodes() const { return free_nodes_; }

    double energy(const std::vector<double>& u, double delta, double p)
    {
        kernels::evaluate(batch_, u.data(), delta * delta, p, result_);
        Sum e;
        for (const double x : result_.energy) {
            e.add(x);
        }
        return e.value();
    }

    /// Energy and projected gradient; with `hessian` also fills the matrix.
    double evaluate(const std::vector<double>& u, double delta, double p, Eigen::VectorXd& grad, bool hessian)
    {
        kernels::evaluate(batch_, u.data(), delta * delta, p, result_);
        grad.setZero(static_cast<Eigen::Index>(free_nodes_.size()));
        if (hessian) {
            std::fill(hessian_.valuePtr(), hessian_.valuePtr() + hessian_.nonZeros(), 0.0);
        }
        Sum e;
        const auto& b = batch_;
        for (std::size_t t = 0; t < b.size(); ++t) {
            e.add(result_.energy[t]);
            const double gx = result_.gx[t];
            const double gy = result_.gy[t];
            const double c1 = result_.coef1[t];
            const double c2 = result_.coef2[t];
            const double bx[3] = {b.bx0[t], b.bx1[t], b.bx2[t]};
            const double by[3] = {b.by0[t], b.by1[t], b.by2[t]};
            double bg[3];
            for (int i = 0; i < 3; ++i) {
                bg[i] = bx[i] * gx + by[i] * gy;
            }
            for (int i = 0; i < 3; ++i) {
                const int r = free_id_[static_cast<std::size_t>(node(t, i))];
                if (r >= 0) {
                    grad[r] += c1 * bg[i];
                }
            }
            if (!hessian) {
                continue;
            }
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    const int s = slot_[t * 9 + static_cast<std::size_t>(i * 3 + j)];
                    if (s >= 0) {
                        hessian_.valuePtr()[s] += c1 * (bx[i] * bx[j] + by[i] * by[j]) + c2 * bg[i] * bg[j];
                    }
                }
            }
        }
        return e.value();
    }

    /// Newton direction; false when the factorisation is unusable.
    bool newton_direction(const Eigen::VectorXd& grad, Eigen::VectorXd& dir)
    {
        ldlt_.factorize(hessian_);
        if (ldlt_.info() != Eigen::Success) {
            return false;
        }
        const auto& d = ldlt_.vectorD();
        if (!(d.minCoeff() > 0.0) || !std::isfinite(d.maxCoeff())) {
            return false;
        }
        dir = -ldlt_.solve(grad);
        return ldlt_.info() == Eigen::Success && dir.allFinite();
    }

private:
    [[nodiscard]] int node(std::size_t t, int i) const
    {
        return prob_.mesh.triangles[t][static_cast<std::size_t>(i)];
    }

    const DirichletProblem& prob_;
    kernels::ElementBatch batch_;
    kernels::ElementResult result_;
    std::vector<int> free_id_;
    std::vector<int> free_nodes_;
    Eigen::SparseMatrix<double> hessian_;
    std::vector<int> slot_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt_;
};

std::vector<double> with_dirichlet(const DirichletProblem& prob)
{
    std::vector<double> u(prob.mesh.node_count(), 0.0);
    for (std::size_t i = 0; i < prob.dirichlet_nodes.size(); ++i) {
        u[static_cast<std::size_t>(prob.dirichlet_nodes[i])] = prob.dirichlet_values[i];
    }
    return u;
}

double max_abs(const Eigen::VectorXd& v)
{
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double tangent_ball_value(const Vec2& x, const Vec2& a, const Vec2& c, double sign)
{
    const double dc = (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1]);
    const double da = (x[0] - a[0]) * (x[0] - a[0]) + (x[1] - a[1]) * (x[1] - a[1]);
    return sign * (1.0 - dc) / (2.0 * da);
}

}  // namespace

void DirichletProblem::validate() const
{
    require(p > 1.0 && std::isfinite(p), ErrorKind::Validation, "solve: p must be finite and > 1");
    require(!mesh.triangles.empty(), ErrorKind::Validation, "solve: empty mesh");
    require(dirichlet_nodes.size() == dirichlet_values.size(), ErrorKind::Validation,
            "solve: dirichlet node and value counts differ");
    std::vector<int> seen(mesh.node_count(), 0);
    for (std::size_t i = 0; i < dirichlet_nodes.size(); ++i) {
        const int v = dirichlet_nodes[i];
        require(v >= 0 && static_cast<std::size_t>(v) < mesh.node_count(), ErrorKind::Validation,
                "solve: dirichlet node out of range");
        require(seen[static_cast<std::size_t>(v)] == 0, ErrorKind::Validation,
                "solve: node " + std::to_string(v) + " has more than one prescribed value");
        require(std::isfinite(dirichlet_values[i]), ErrorKind::Validation, "solve: boundary data must be finite");
        seen[static_cast<std::size_t>(v)] = 1;
    }
    for (const int v : mesh.boundary_nodes()) {
        require(seen[static_cast<std::size_t>(v)] != 0, ErrorKind::Validation,
                "solve: boundary node " + std::to_string(v) + " has no prescribed value");
    }
}

DirichletProblem make_problem(Mesh2D mesh, double p, const std::vector<BoundaryRule>& rules)
{
    std::map<int, std::set<std::string>> tags;
    for (const auto& e : mesh.boundary_edges) {
        tags[e.nodes[0]].insert(e.tag);
        tags[e.nodes[1]].insert(e.tag);
    }
    DirichletProblem prob;
    prob.p = p;
    for (const auto& [node, node_tags] : tags) {
        bool assigned = false;
        for (const auto& [tag, fn] : rules) {
            if (node_tags.count(tag) != 0) {
                prob.dirichlet_nodes.push_back(node);
                prob.dirichlet_values.push_back(fn(mesh.vertices[static_cast<std::size_t>(node)]));
                assigned = true;
                break;
            }
        }
        require(assigned, ErrorKind::Validation, "make_problem: no rule for boundary node " + std::to_string(node));
    }
    prob.mesh = std::move(mesh);
    return prob;
}

nlohmann::json DiscreteSolution::log_json() const
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : log) {
        out.push_back({{"iter", e.iter},
                       {"energy", e.energy},
                       {"grad_norm", e.grad_norm},
                       {"delta", e.delta},
                       {"gradient_step", e.gradient_step}});
    }
    return out;
}

double discrete_energy(const DirichletProblem& prob, const std::vector<double>& u, double delta)
{
    Assembly asmb(prob);
    return asmb.energy(u, delta, prob.p);
}

double projected_gradient_norm(const DirichletProblem& prob, const std::vector<double>& u, double delta)
{
    Assembly asmb(prob);
    Eigen::VectorXd g;
    asmb.evaluate(u, delta, prob.p, g, false);
    return max_abs(g);
}

DiscreteSolution solve_dirichlet(const DirichletProblem& prob, const SolverOptions& opts)
{
    prob.validate();
    require(opts.tol > 0.0 && opts.stage_tol > 0.0, ErrorKind::Validation, "solve: tolerances must be positive");
    require(!opts.schedule.empty() && opts.schedule.back() == 0.0, ErrorKind::Validation,
            "solve: regularisation schedule must end at 0");
    for (std::size_t i = 0; i < opts.schedule.size(); ++i) {
        require(opts.schedule[i] >= 0.0 && (i == 0 || opts.schedule[i] < opts.schedule[i - 1]), ErrorKind::Validation,
                "solve: regularisation schedule must be non-negative and strictly decreasing");
    }
    Assembly asmb(prob);
    const auto& free_nodes = asmb.free_nodes();
    DiscreteSolution sol;
    std::vector<double> u = with_dirichlet(prob);
    Eigen::VectorXd grad;
    Eigen::VectorXd dir;

    // Initial iterate: the p = 2 solution with the same data.
    if (asmb.free_count() > 0) {
        asmb.evaluate(u, 0.0, 2.0, grad, true);
        require(asmb.newton_direction(grad, dir), ErrorKind::Solver, "solve: singular Laplace system");
        for (std::size_t i = 0; i < free_nodes.size(); ++i) {
            u[static_cast<std::size_t>(free_nodes[i])] += dir[static_cast<Eigen::Index>(i)];
        }
    }
    sol.initial_energy = asmb.energy(u, 0.0, prob.p);

    std::vector<double> trial(u.size());
    int iter = 0;
    for (const double delta : opts.schedule) {
        ++sol.outer_iterations;
        asmb.evaluate(u, 0.0, prob.p, grad, false);
        if (max_abs(grad) <= opts.tol) {
            break;
        }
        const double target = delta == 0.0 ? opts.tol : std::max(opts.tol, opts.stage_tol);
        bool converged = false;
        for (int k = 0; k < opts.max_newton; ++k) {
            const double energy = asmb.evaluate(u, delta, prob.p, grad, true);
            const double gnorm = max_abs(grad);
            LogEntry entry{iter, energy, gnorm, delta, false};
            if (gnorm <= target) {
                sol.log.push_back(entry);
                converged = true;
                break;
            }
            bool newton = asmb.newton_direction(grad, dir);
            if (newton && !(grad.dot(dir) < 0.0)) {
                newton = false;
            }
            if (!newton) {
                dir = -grad;
                entry.gradient_step = true;
                ++sol.gradient_fallbacks;
            }
            sol.log.push_back(entry);
            const double slope = grad.dot(dir);
            const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(energy);
            double alpha = 1.0;
            for (;;) {
                trial = u;
                for (std::size_t i = 0; i < free_nodes.size(); ++i) {
                    trial[static_cast<std::size_t>(free_nodes[i])] += alpha * dir[static_cast<Eigen::Index>(i)];
                }
                const double e_trial = asmb.energy(trial, delta, prob.p);
                if (std::isfinite(e_trial) && e_trial <= energy + 1e-4 * alpha * slope + slack) {
                    break;
                }
                alpha *= 0.5;
                if (alpha < std::ldexp(1.0, -40)) {
                    fail(ErrorKind::LineSearch, "solve: no energy decrease along the search direction (delta=" +
                                                    fmt17(delta) + ", grad_norm=" + fmt17(gnorm) + ")");
                }
            }
            u.swap(trial);
            ++iter;
            ++sol.iterations;
        }
        if (!converged) {
            if (delta == 0.0) {
                fail(ErrorKind::Solver, "solve: Newton iteration limit reached at delta = 0");
            }
        }
    }
    sol.energy = asmb.energy(u, 0.0, prob.p);
    asmb.evaluate(u, 0.0, prob.p, grad, false);
    sol.residual_norm = max_abs(grad);
    require(sol.residual_norm <= opts.tol, ErrorKind::Solver,
            "solve: projected gradient " + fmt17(sol.residual_norm) + " above tolerance");
    sol.values = std::move(u);
    return sol;
}

std::string solution_csv(const Mesh2D& mesh, const std::vector<double>& values)
{
    require(values.size() == mesh.node_count(), ErrorKind::Validation, "solution_csv: value count mismatch");
    std::string out = "node,x,y,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(i) + "," + fmt17(mesh.vertices[i][0]) + "," + fmt17(mesh.vertices[i][1]) + "," +
               fmt17(values[i]) + "\n";
    }
    return out;
}

void FundamentalOptions::validate() const
{
    require(radius > 0.0 && std::isfinite(radius), ErrorKind::Validation, "fundamental: radius must be positive");
    const double da = std::hypot(a[0] - center[0], a[1] - center[1]);
    require(std::abs(da - radius) <= 1e-9 * radius, ErrorKind::Validation, "fundamental: a must lie on the circle");
    require(p == 2.0, ErrorKind::Validation, "fundamental: the planar scheme needs p = n = 2");
    require(!schedule.empty(), ErrorKind::Validation, "fundamental: empty epsilon schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        require(schedule[i] > 0.0 && schedule[i] < radius, ErrorKind::Validation,
                "fundamental: epsilon must lie in (0, radius)");
        require(i == 0 || schedule[i] < schedule[i - 1], ErrorKind::Validation,
                "fundamental: epsilon schedule must be strictly decreasing");
    }
    require(h > 0.0 && h < radius, ErrorKind::Validation, "fundamental: need 0 < h < radius");
    require(monotonicity_tol > 0.0 && sandwich_tol > 0.0, ErrorKind::Validation,
            "fundamental: tolerances must be positive");
}

double disk_singular_solution(const Vec2& x, const Vec2& center, double radius, const Vec2& a)
{
    const double dc = (x[0] - center[0]) * (x[0] - center[0]) + (x[1] - center[1]) * (x[1] - center[1]);
    const double da = (x[0] - a[0]) * (x[0] - a[0]) + (x[1] - a[1]) * (x[1] - a[1]);
    return (radius * radius - dc) / (2.0 * radius * da);
}

bool FundamentalResult::monotone() const
{
    return std::all_of(monotonicity.begin(), monotonicity.end(), [](const auto& r) { return r.pass; });
}

bool FundamentalResult::sandwiched() const
{
    return std::all_of(sandwich.begin(), sandwich.end(), [](const auto& r) { return r.pass; });
}

nlohmann::json FundamentalResult::report() const
{
    nlohmann::json mono = nlohmann::json::array();
    for (const auto& r : monotonicity) {
        mono.push_back({{"eps_coarse", r.eps_coarse},
                        {"eps_fine", r.eps_fine},
                        {"shared_nodes", r.shared_nodes},
                        {"max_increase", r.max_increase},
                        {"pass", r.pass}});
    }
    nlohmann::json sand = nlohmann::json::array();
    for (const auto& r : sandwich) {
        sand.push_back({{"epsilon", r.epsilon},
                        {"checked", r.checked},
                        {"worst_lower", r.worst_lower},
                        {"worst_upper", r.worst_upper},
                        {"pass", r.pass}});
    }
    nlohmann::json solves = nlohmann::json::array();
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        solves.push_back({{"epsilon", schedule[i]},
                          {"nodes", meshes[i].node_count()},
                          {"triangles", meshes[i].triangles.size()},
                          {"energy", solutions[i].energy},
                          {"iterations", solutions[i].iterations},
                          {"residual_norm", solutions[i].residual_norm}});
    }
    nlohmann::json out = {{"solves", solves},
                          {"monotonicity", mono},
                          {"sandwich", sand},
                          {"monotone", monotone()},
                          {"sandwiched", sandwiched()},
                          {"comparison",
                           {{"nodes", compared_nodes},
                            {"error_finest", error_finest},
                            {"error_extrapolated", extrapolated.empty() ? nlohmann::json(nullptr)
                                                                        : nlohmann::json(error_extrapolated)}}}};
    return out;
}

FundamentalResult fundamental_solution(const FundamentalOptions& opts)
{
    opts.validate();
    const Vec2 c = opts.center;
    const double R = opts.radius;
    const Vec2 a = opts.a;
    const Vec2 n{(a[0] - c[0]) / R, (a[1] - c[1]) / R};
    // Unit tangent balls at a.
    const Vec2 ci{a[0] - n[0], a[1] - n[1]};
    const Vec2 ce{a[0] + n[0], a[1] + n[1]};
    auto v_int = [&](const Vec2& x) { return tangent_ball_value(x, a, ci, 1.0); };
    auto v_ext = [&](const Vec2& x) { return tangent_ball_value(x, a, ce, -1.0); };

    DiskMeshOptions mopts;
    mopts.center = c;
    mopts.radius = R;
    mopts.a = a;
    mopts.arcs = opts.schedule;
    mopts.h = opts.h;
    const Mesh2D base = mesh_disk_base(mopts);

    FundamentalResult res;
    res.schedule = opts.schedule;
    std::vector<std::vector<double>> by_base;  // base-indexed values, NaN where absent
    for (const double eps : opts.schedule) {
        Mesh2D mesh = cut_puncture(base, a, eps, c, R);
        // The outer circle wins at the two corner nodes.
        DirichletProblem prob = make_problem(mesh, opts.p, {{"outer", [](const Vec2&) { return 0.0; }}, {"inner-arc", v_ext}});
        DiscreteSolution sol = solve_dirichlet(prob, opts.solver);
        std::vector<double> full(base.node_count(), std::numeric_limits<double>::quiet_NaN());
        for (std::size_t v = 0; v < mesh.node_count(); ++v) {
            full[static_cast<std::size_t>(mesh.base_index[v])] = sol.values[v];
        }

        SandwichRow row;
        row.epsilon = eps;
        for (std::size_t v = 0; v < mesh.node_count(); ++v) {
            const Vec2& x = mesh.vertices[v];
            const double dci = std::hypot(x[0] - ci[0], x[1] - ci[1]);
            if (dci > 1.0) {
                continue;  // outside the interior tangent ball
            }
            ++row.checked;
            row.worst_lower = std::max(row.worst_lower, v_int(x) - sol.values[v]);
            row.worst_upper = std::max(row.worst_upper, sol.values[v] - v_ext(x));
        }
        row.pass = row.worst_lower <= opts.sandwich_tol && row.worst_upper <= opts.sandwich_tol;
        res.sandwich.push_back(row);

        res.meshes.push_back(std::move(mesh));
        res.solutions.push_back(std::move(sol));
        by_base.push_back(std::move(full));
    }

    for (std::size_t i = 0; i + 1 < by_base.size(); ++i) {
        MonotonicityRow row;
        row.eps_coarse = opts.schedule[i];
        row.eps_fine = opts.schedule[i + 1];
        row.max_increase = -std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < base.node_count(); ++v) {
            const double coarse = by_base[i][v];
            const double fine = by_base[i + 1][v];
            if (std::isnan(coarse) || std::isnan(fine)) {
                continue;
            }
            ++row.shared_nodes;
            row.max_increase = std::max(row.max_increase, fine - coarse);
        }
        row.pass = row.shared_nodes > 0 && row.max_increase <= opts.monotonicity_tol;
        res.monotonicity.push_back(row);
    }

    // Oracle comparison on the second finest mesh (all its nodes carry both
    // of the two finest solutions).
    const std::size_t last = by_base.size() - 1;
    const Mesh2D& cmp_mesh = res.meshes[last > 0 ? last - 1 : last];
    double sup_oracle = 0.0, err_fine = 0.0, err_extra = 0.0;
    const double e1 = opts.schedule[last];
    const double e2 = last > 0 ? opts.schedule[last - 1] : 0.0;
    for (std::size_t v = 0; v < cmp_mesh.node_count(); ++v) {
        const Vec2& x = cmp_mesh.vertices[v];
        const auto bi = static_cast<std::size_t>(cmp_mesh.base_index[v]);
        const double fine = by_base[last][bi];
        double extra = fine;
        if (last > 0) {
            const double coarse = by_base[last - 1][bi];
            extra = (e2 * fine - e1 * coarse) / (e2 - e1);
            res.extrapolated.push_back(extra);
        }
        if (std::hypot(x[0] - a[0], x[1] - a[1]) < opts.compare_min_distance) {
            continue;
        }
        const double oracle = disk_singular_solution(x, c, R, a);
        ++res.compared_nodes;
        sup_oracle = std::max(sup_oracle, std::abs(oracle));
        err_fine = std::max(err_fine, std::abs(fine - oracle));
        err_extra = std::max(err_extra, std::abs(extra - oracle));
    }
    require(res.compared_nodes > 0 && sup_oracle > 0.0, ErrorKind::Verification,
            "fundamental: no nodes in the comparison region");
    res.error_finest = err_fine / sup_oracle;
    res.error_extrapolated = err_extra / sup_oracle;
    return res;
}

}  // namespace plap::solver

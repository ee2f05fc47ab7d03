#include "plap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <unordered_map>

namespace plap::solver {

namespace {

double orient_raw(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

/// Twice the signed area of abc. Evaluated with the edge endpoints in a
/// canonical order so that orient(a, b, c) == -orient(b, a, c) exactly, which
/// keeps walks from cycling across an edge that both sides see as "behind".
double orient(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return (a < b) ? orient_raw(a, b, c) : -orient_raw(b, a, c);
}

/// Positive when d lies inside the circumcircle of the counter-clockwise triangle abc.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const double adx = a[0] - d[0], ady = a[1] - d[1];
    const double bdx = b[0] - d[0], bdy = b[1] - d[1];
    const double cdx = c[0] - d[0], cdy = c[1] - d[1];
    return (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
           (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
}

double dist(const Vec2& a, const Vec2& b)
{
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

std::uint64_t edge_key(int a, int b)
{
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (hi << 32) | lo;
}

/// Boundary piece that a constrained edge must follow when it is split.
struct Curve {
    bool circle = false;
    Vec2 center{};
    double radius = 0.0;
};

struct Constraint {
    int a;
    int b;
    Curve curve;
};

class Triangulator {
public:
    explicit Triangulator(const std::vector<Vec2>& points) : pts_(points), n_real_(static_cast<int>(points.size()))
    {
        require(!points.empty(), ErrorKind::MeshGeneration, "delaunay: no points");
        double xmin = points[0][0], xmax = xmin, ymin = points[0][1], ymax = ymin;
        for (const auto& p : points) {
            xmin = std::min(xmin, p[0]);
            xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, p[1]);
            ymax = std::max(ymax, p[1]);
        }
        const double size = std::max({xmax - xmin, ymax - ymin, 1e-3});
        const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
        pts_.push_back({cx - 20.0 * size, cy - 10.0 * size});
        pts_.push_back({cx + 20.0 * size, cy - 10.0 * size});
        pts_.push_back({cx, cy + 20.0 * size});
        tris_.push_back(Tri{{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}, true});
        for (int i = 0; i < n_real_; ++i) {
            insert(i);
        }
    }

    /// Adds a point and returns its index.
    int add_point(const Vec2& p)
    {
        pts_.push_back(p);
        const int id = static_cast<int>(pts_.size()) - 1;
        extra_.push_back(id);
        insert(id);
        return id;
    }

    void enforce(std::vector<Constraint> constraints)
    {
        for (int round = 0; round < 30; ++round) {
            const auto edges = edge_set();
            std::vector<Constraint> next;
            bool all_present = true;
            for (const auto& c : constraints) {
                if (edges.count(edge_key(c.a, c.b)) != 0) {
                    next.push_back(c);
                    continue;
                }
                all_present = false;
                const Vec2 mid = midpoint(c);
                const int m = add_point(mid);
                next.push_back({c.a, m, c.curve});
                next.push_back({m, c.b, c.curve});
            }
            constraints = std::move(next);
            if (all_present) {
                return;
            }
        }
        fail(ErrorKind::MeshGeneration, "delaunay: boundary edges could not be recovered");
    }

    Mesh2D finish() const
    {
        // Real points first, then recovery points; super vertices are dropped.
        Mesh2D mesh;
        std::vector<int> remap(pts_.size(), -1);
        for (int i = 0; i < n_real_; ++i) {
            remap[static_cast<std::size_t>(i)] = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(pts_[static_cast<std::size_t>(i)]);
        }
        for (const int id : extra_) {
            remap[static_cast<std::size_t>(id)] = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(pts_[static_cast<std::size_t>(id)]);
        }
        for (const auto& t : tris_) {
            if (!t.alive || is_super(t.v[0]) || is_super(t.v[1]) || is_super(t.v[2])) {
                continue;
            }
            mesh.triangles.push_back({remap[static_cast<std::size_t>(t.v[0])], remap[static_cast<std::size_t>(t.v[1])],
                                      remap[static_cast<std::size_t>(t.v[2])]});
        }
        mesh.base_index.resize(mesh.vertices.size());
        for (std::size_t i = 0; i < mesh.base_index.size(); ++i) {
            mesh.base_index[i] = static_cast<int>(i);
        }
        mesh.rebuild_adjacency();
        return mesh;
    }

private:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> n;
        bool alive;
    };

    [[nodiscard]] bool is_super(int v) const { return v >= n_real_ && v < n_real_ + 3; }
    [[nodiscard]] const Vec2& P(int i) const { return pts_[static_cast<std::size_t>(i)]; }

    Vec2 midpoint(const Constraint& c) const
    {
        const Vec2& a = P(c.a);
        const Vec2& b = P(c.b);
        if (!c.curve.circle) {
            return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
        }
        const Vec2& o = c.curve.center;
        double dx = (a[0] - o[0]) + (b[0] - o[0]);
        double dy = (a[1] - o[1]) + (b[1] - o[1]);
        const double len = std::hypot(dx, dy);
        dx /= len;
        dy /= len;
        return {o[0] + c.curve.radius * dx, o[1] + c.curve.radius * dy};
    }

    std::unordered_map<std::uint64_t, int> edge_set() const
    {
        std::unordered_map<std::uint64_t, int> edges;
        for (const auto& t : tris_) {
            if (!t.alive) {
                continue;
            }
            for (int i = 0; i < 3; ++i) {
                edges[edge_key(t.v[static_cast<std::size_t>(i)], t.v[static_cast<std::size_t>((i + 1) % 3)])] = 1;
            }
        }
        return edges;
    }

    int locate(const Vec2& p)
    {
        int t = last_;
        if (t < 0 || !tris_[static_cast<std::size_t>(t)].alive) {
            t = 0;
            while (!tris_[static_cast<std::size_t>(t)].alive) {
                ++t;
            }
        }
        const std::size_t limit = 4 * tris_.size() + 100;
        for (std::size_t step = 0; step < limit; ++step) {
            const Tri& tri = tris_[static_cast<std::size_t>(t)];
            bool moved = false;
            for (int k = 0; k < 3; ++k) {
                const int i = static_cast<int>((k + step) % 3);
                const int a = tri.v[static_cast<std::size_t>((i + 1) % 3)];
                const int b = tri.v[static_cast<std::size_t>((i + 2) % 3)];
                if (orient(P(a), P(b), p) < 0.0) {
                    const int nb = tri.n[static_cast<std::size_t>(i)];
                    require(nb >= 0, ErrorKind::MeshGeneration, "delaunay: point outside the super triangle");
                    t = nb;
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                return t;
            }
        }
        // Walk did not settle (only possible through rounding); scan instead.
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            const Tri& tri = tris_[i];
            if (tri.alive && orient(P(tri.v[0]), P(tri.v[1]), p) >= 0.0 && orient(P(tri.v[1]), P(tri.v[2]), p) >= 0.0 &&
                orient(P(tri.v[2]), P(tri.v[0]), p) >= 0.0) {
                return static_cast<int>(i);
            }
        }
        fail(ErrorKind::MeshGeneration, "delaunay: point location failed at (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) + ")");
    }

    bool in_circle(int t, const Vec2& p) const
    {
        const Tri& tri = tris_[static_cast<std::size_t>(t)];
        return incircle(P(tri.v[0]), P(tri.v[1]), P(tri.v[2]), p) > 0.0;
    }

    /// Edge (a, b) of a cavity triangle is visible when p lies strictly to its left.
    bool visible(int a, int b, const Vec2& p) const
    {
        const double scale = dist(P(a), P(b)) * std::max(dist(P(a), p), dist(P(b), p));
        return orient(P(a), P(b), p) > 1e-12 * scale;
    }

    void insert(int pid)
    {
        const Vec2 p = P(pid);
        const int t0 = locate(p);
        for (const int v : tris_[static_cast<std::size_t>(t0)].v) {
            require(dist(P(v), p) > 1e-12, ErrorKind::MeshGeneration, "delaunay: duplicate point");
        }
        std::vector<char>& mark = mark_;
        mark.assign(tris_.size(), 0);
        std::vector<int> cavity{t0};
        mark[static_cast<std::size_t>(t0)] = 1;
        // Points on an edge of t0 also claim the neighbour across it.
        {
            const Tri& tri = tris_[static_cast<std::size_t>(t0)];
            for (int i = 0; i < 3; ++i) {
                const int a = tri.v[static_cast<std::size_t>((i + 1) % 3)];
                const int b = tri.v[static_cast<std::size_t>((i + 2) % 3)];
                const int nb = tri.n[static_cast<std::size_t>(i)];
                if (nb >= 0 && !visible(a, b, p) && mark[static_cast<std::size_t>(nb)] == 0) {
                    mark[static_cast<std::size_t>(nb)] = 1;
                    cavity.push_back(nb);
                }
            }
        }
        for (std::size_t k = 0; k < cavity.size(); ++k) {
            const Tri tri = tris_[static_cast<std::size_t>(cavity[k])];
            for (const int nb : tri.n) {
                if (nb >= 0 && mark[static_cast<std::size_t>(nb)] == 0 && in_circle(nb, p)) {
                    mark[static_cast<std::size_t>(nb)] = 1;
                    cavity.push_back(nb);
                }
            }
        }
        repair(cavity, t0, p);

        struct Rim {
            int a, b, outside, old;
        };
        std::vector<Rim> rim;
        for (const int t : cavity) {
            const Tri& tri = tris_[static_cast<std::size_t>(t)];
            for (int i = 0; i < 3; ++i) {
                const int nb = tri.n[static_cast<std::size_t>(i)];
                if (nb < 0 || mark[static_cast<std::size_t>(nb)] == 0) {
                    rim.push_back({tri.v[static_cast<std::size_t>((i + 1) % 3)], tri.v[static_cast<std::size_t>((i + 2) % 3)],
                                   nb, t});
                }
            }
        }
        for (const int t : cavity) {
            tris_[static_cast<std::size_t>(t)].alive = false;
            free_.push_back(t);
        }
        std::unordered_map<int, int> by_start;
        std::vector<int> created;
        for (const auto& e : rim) {
            int slot;
            if (!free_.empty()) {
                slot = free_.back();
                free_.pop_back();
            } else {
                slot = static_cast<int>(tris_.size());
                tris_.push_back({});
            }
            tris_[static_cast<std::size_t>(slot)] = Tri{{e.a, e.b, pid}, {-1, -1, e.outside}, true};
            if (e.outside >= 0) {
                // Match by edge: slot numbers are recycled within this loop.
                Tri& out = tris_[static_cast<std::size_t>(e.outside)];
                for (int i = 0; i < 3; ++i) {
                    if (out.v[static_cast<std::size_t>((i + 1) % 3)] == e.b && out.v[static_cast<std::size_t>((i + 2) % 3)] == e.a) {
                        out.n[static_cast<std::size_t>(i)] = slot;
                    }
                }
            }
            require(by_start.emplace(e.a, slot).second, ErrorKind::MeshGeneration, "delaunay: cavity not simple");
            created.push_back(slot);
        }
        for (const int t : created) {
            Tri& tri = tris_[static_cast<std::size_t>(t)];
            const auto it = by_start.find(tri.v[1]);
            require(it != by_start.end(), ErrorKind::MeshGeneration, "delaunay: open cavity boundary");
            tri.n[0] = it->second;
            tris_[static_cast<std::size_t>(it->second)].n[1] = t;
        }
        last_ = created.front();
    }

    /// Shrinks the cavity until every rim edge is visible from p and the
    /// cavity stays connected to t0.
    void repair(std::vector<int>& cavity, int t0, const Vec2& p)
    {
        std::vector<char>& mark = mark_;
        for (bool changed = true; changed;) {
            changed = false;
            for (const int t : cavity) {
                if (t == t0 || mark[static_cast<std::size_t>(t)] == 0) {
                    continue;
                }
                const Tri& tri = tris_[static_cast<std::size_t>(t)];
                for (int i = 0; i < 3; ++i) {
                    const int nb = tri.n[static_cast<std::size_t>(i)];
                    const bool rim = nb < 0 || mark[static_cast<std::size_t>(nb)] == 0;
                    if (rim && !visible(tri.v[static_cast<std::size_t>((i + 1) % 3)],
                                        tri.v[static_cast<std::size_t>((i + 2) % 3)], p)) {
                        mark[static_cast<std::size_t>(t)] = 0;
                        changed = true;
                        break;
                    }
                }
            }
            // Keep only the part reachable from t0.
            std::vector<int> kept{t0};
            std::vector<char> seen(tris_.size(), 0);
            seen[static_cast<std::size_t>(t0)] = 1;
            for (std::size_t k = 0; k < kept.size(); ++k) {
                for (const int nb : tris_[static_cast<std::size_t>(kept[k])].n) {
                    if (nb >= 0 && mark[static_cast<std::size_t>(nb)] != 0 && seen[static_cast<std::size_t>(nb)] == 0) {
                        seen[static_cast<std::size_t>(nb)] = 1;
                        kept.push_back(nb);
                    }
                }
            }
            for (const int t : cavity) {
                if (seen[static_cast<std::size_t>(t)] == 0 && mark[static_cast<std::size_t>(t)] != 0) {
                    mark[static_cast<std::size_t>(t)] = 0;
                    changed = true;
                }
            }
            std::sort(kept.begin(), kept.end());
            cavity = std::move(kept);
        }
    }

    std::vector<Vec2> pts_;
    int n_real_;
    std::vector<int> extra_;
    std::vector<Tri> tris_;
    std::vector<int> free_;
    std::vector<char> mark_;
    int last_ = 0;
};

std::vector<Vec2> triangular_lattice(const Vec2& lo, const Vec2& hi, double h)
{
    std::vector<Vec2> out;
    const double dy = h * std::sqrt(3.0) / 2.0;
    const int rows = static_cast<int>(std::ceil((hi[1] - lo[1]) / dy));
    const int cols = static_cast<int>(std::ceil((hi[0] - lo[0]) / h)) + 1;
    for (int j = 0; j <= rows; ++j) {
        const double y = lo[1] + j * dy;
        const double shift = (j % 2 != 0) ? 0.5 * h : 0.0;
        for (int i = 0; i <= cols; ++i) {
            out.push_back({lo[0] + shift + i * h, y});
        }
    }
    return out;
}

void tag_edges(Mesh2D& mesh, const std::function<std::string(const Vec2&, const Vec2&)>& tagger)
{
    for (auto& e : mesh.boundary_edges) {
        e.tag = tagger(mesh.vertices[static_cast<std::size_t>(e.nodes[0])], mesh.vertices[static_cast<std::size_t>(e.nodes[1])]);
        require(!e.tag.empty(), ErrorKind::MeshGeneration, "mesh: boundary edge off the prescribed curves");
    }
}

}  // namespace

std::vector<int> Mesh2D::boundary_nodes() const
{
    std::vector<int> nodes;
    for (const auto& e : boundary_edges) {
        nodes.push_back(e.nodes[0]);
        nodes.push_back(e.nodes[1]);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

double Mesh2D::triangle_area(std::size_t t) const
{
    const auto& tri = triangles[t];
    return 0.5 * orient(vertices[static_cast<std::size_t>(tri[0])], vertices[static_cast<std::size_t>(tri[1])],
                        vertices[static_cast<std::size_t>(tri[2])]);
}

void Mesh2D::rebuild_adjacency()
{
    neighbors.assign(triangles.size(), {-1, -1, -1});
    std::unordered_map<std::uint64_t, std::pair<int, int>> open;
    open.reserve(triangles.size() * 2);
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        for (int i = 0; i < 3; ++i) {
            const int a = triangles[t][static_cast<std::size_t>((i + 1) % 3)];
            const int b = triangles[t][static_cast<std::size_t>((i + 2) % 3)];
            const auto key = edge_key(a, b);
            const auto it = open.find(key);
            if (it == open.end()) {
                open.emplace(key, std::make_pair(static_cast<int>(t), i));
            } else {
                const auto [u, j] = it->second;
                neighbors[t][static_cast<std::size_t>(i)] = u;
                neighbors[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)] = static_cast<int>(t);
                open.erase(it);
            }
        }
    }
    boundary_edges.clear();
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        for (int i = 0; i < 3; ++i) {
            if (neighbors[t][static_cast<std::size_t>(i)] < 0) {
                boundary_edges.push_back(
                    {{triangles[t][static_cast<std::size_t>((i + 1) % 3)], triangles[t][static_cast<std::size_t>((i + 2) % 3)]}, ""});
            }
        }
    }
}

nlohmann::json Mesh2D::to_json() const
{
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : vertices) {
        verts.push_back({v[0], v[1]});
    }
    nlohmann::json tris = nlohmann::json::array();
    for (const auto& t : triangles) {
        tris.push_back({t[0], t[1], t[2]});
    }
    nlohmann::json bnd = nlohmann::json::array();
    for (const auto& e : boundary_edges) {
        bnd.push_back({{"edge", {e.nodes[0], e.nodes[1]}}, {"tag", e.tag}});
    }
    return {{"vertices", verts}, {"triangles", tris}, {"boundary", bnd}};
}

std::string check_mesh(const Mesh2D& mesh)
{
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (!(mesh.triangle_area(t) > 0.0)) {
            return "triangle " + std::to_string(t) + " is not positively oriented";
        }
    }
    std::vector<std::size_t> order(mesh.vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mesh.vertices[a] < mesh.vertices[b]; });
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const auto& a = mesh.vertices[order[i]];
            const auto& b = mesh.vertices[order[j]];
            if (b[0] - a[0] > 1e-12) {
                break;
            }
            if (dist(a, b) <= 1e-12) {
                return "duplicate vertices " + std::to_string(order[i]) + " and " + std::to_string(order[j]);
            }
        }
    }
    std::unordered_map<std::uint64_t, int> count;
    for (const auto& t : mesh.triangles) {
        for (int i = 0; i < 3; ++i) {
            ++count[edge_key(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)])];
        }
    }
    for (const auto& e : mesh.boundary_edges) {
        const auto it = count.find(edge_key(e.nodes[0], e.nodes[1]));
        if (it == count.end() || it->second != 1) {
            return "boundary edge " + std::to_string(e.nodes[0]) + "-" + std::to_string(e.nodes[1]) +
                   " does not belong to exactly one triangle";
        }
    }
    return {};
}

Mesh2D delaunay(const std::vector<Vec2>& points)
{
    return Triangulator(points).finish();
}

Mesh2D mesh_disk_base(const DiskMeshOptions& opts)
{
    const double R = opts.radius;
    const double h = opts.h;
    require(R > 0.0 && h > 0.0 && h < R, ErrorKind::MeshGeneration, "mesh_disk: need 0 < h < radius");
    const Vec2 c = opts.center;
    std::vector<Vec2> pts;
    std::vector<Constraint> constraints;
    std::vector<std::pair<double, int>> outer;  // (angle around c, index)
    auto angle_of = [&](const Vec2& x) { return std::atan2(x[1] - c[1], x[0] - c[0]); };
    auto add_outer = [&](const Vec2& x) {
        outer.emplace_back(angle_of(x), static_cast<int>(pts.size()));
        pts.push_back(x);
    };

    double ring_max = 0.0;
    Vec2 a{};
    if (opts.a) {
        a = *opts.a;
        require(std::abs(dist(a, c) - R) <= 1e-12 * R, ErrorKind::MeshGeneration, "mesh_disk: a must lie on the circle");
        std::vector<double> arcs = opts.arcs;
        std::sort(arcs.begin(), arcs.end());
        for (const double e : arcs) {
            require(e > 0.0 && e < R, ErrorKind::MeshGeneration, "mesh_disk: arc radii must lie in (0, radius)");
        }
        auto size = [&](double d) { return std::clamp(h * d / opts.grading, h / 8.0, h); };
        ring_max = std::min(std::max(arcs.empty() ? 0.0 : arcs.back(), opts.grading), R);
        const double r0 = arcs.empty() ? size(0.0) * 2.0 : arcs.front();
        std::vector<double> targets(arcs.begin(), arcs.end());
        if (targets.empty() || targets.back() < ring_max) {
            targets.push_back(ring_max);
        }
        std::vector<double> radii{r0};
        for (const double target : targets) {
            if (target <= radii.back()) {
                continue;
            }
            std::vector<double> seg;
            double r = radii.back();
            while (r + 1.5 * size(r) < target) {
                r += size(r);
                seg.push_back(r);
            }
            // Stretch the interior rings so that the gaps stay graded.
            const double start = radii.back();
            const double span = (seg.empty() ? target : r + size(r)) - start;
            for (const double s : seg) {
                radii.push_back(start + (s - start) * (target - start) / span);
            }
            radii.push_back(target);
        }
        const Vec2 nrm{(a[0] - c[0]) / R, (a[1] - c[1]) / R};
        const Vec2 tan{-nrm[1], nrm[0]};
        for (const double r : radii) {
            const double amax = std::acos(r / (2.0 * R));
            const int m = std::max(2, static_cast<int>(std::ceil(2.0 * amax * r / size(r))));
            std::vector<int> ring;
            for (int j = 0; j <= m; ++j) {
                const double al = -amax + 2.0 * amax * j / m;
                const Vec2 x{a[0] + r * (-std::cos(al) * nrm[0] + std::sin(al) * tan[0]),
                             a[1] + r * (-std::cos(al) * nrm[1] + std::sin(al) * tan[1])};
                ring.push_back(static_cast<int>(pts.size()));
                if (j == 0 || j == m) {
                    add_outer(x);
                } else {
                    pts.push_back(x);
                }
            }
            const bool exact = std::find(arcs.begin(), arcs.end(), r) != arcs.end();
            if (exact) {
                for (std::size_t j = 0; j + 1 < ring.size(); ++j) {
                    constraints.push_back({ring[j], ring[j + 1], Curve{true, a, r}});
                }
            }
        }
        // Remaining outer circle, away from the ring zone, at spacing h.
        const double phi = 2.0 * std::asin(ring_max / (2.0 * R));
        const double a_angle = angle_of(a);
        const double span = 2.0 * std::numbers::pi - 2.0 * phi;
        const int m = std::max(2, static_cast<int>(std::ceil(span * R / h)));
        for (int j = 1; j < m; ++j) {
            const double t = a_angle + phi + span * j / m;
            add_outer({c[0] + R * std::cos(t), c[1] + R * std::sin(t)});
        }
    } else {
        const int m = std::max(8, static_cast<int>(std::ceil(2.0 * std::numbers::pi * R / h)));
        for (int j = 0; j < m; ++j) {
            const double t = 2.0 * std::numbers::pi * j / m;
            add_outer({c[0] + R * std::cos(t), c[1] + R * std::sin(t)});
        }
    }
    for (const auto& x : triangular_lattice({c[0] - R, c[1] - R}, {c[0] + R, c[1] + R}, h)) {
        if (dist(x, c) > R - 0.5 * h) {
            continue;
        }
        if (opts.a && dist(x, a) < ring_max + 0.5 * h) {
            continue;
        }
        pts.push_back(x);
    }
    std::sort(outer.begin(), outer.end());
    for (std::size_t j = 0; j < outer.size(); ++j) {
        constraints.push_back({outer[j].second, outer[(j + 1) % outer.size()].second, Curve{true, c, R}});
    }

    Triangulator tri(pts);
    tri.enforce(constraints);
    Mesh2D mesh = tri.finish();
    tag_edges(mesh, [&](const Vec2& p, const Vec2& q) -> std::string {
        const bool on = std::abs(dist(p, c) - R) <= 1e-10 && std::abs(dist(q, c) - R) <= 1e-10;
        return on ? "outer" : "";
    });
    const auto problem = check_mesh(mesh);
    require(problem.empty(), ErrorKind::MeshGeneration, "mesh_disk: " + problem);
    return mesh;
}

Mesh2D cut_puncture(const Mesh2D& base, const Vec2& a, double epsilon, const Vec2& center, double radius)
{
    const double cut = epsilon * (1.0 + 1e-12) + 1e-14;
    std::vector<int> remap(base.vertices.size(), -1);
    Mesh2D mesh;
    for (const auto& t : base.triangles) {
        const bool inside = dist(base.vertices[static_cast<std::size_t>(t[0])], a) <= cut &&
                            dist(base.vertices[static_cast<std::size_t>(t[1])], a) <= cut &&
                            dist(base.vertices[static_cast<std::size_t>(t[2])], a) <= cut;
        if (!inside) {
            mesh.triangles.push_back(t);
            for (const int v : t) {
                remap[static_cast<std::size_t>(v)] = 0;
            }
        }
    }
    for (std::size_t v = 0; v < base.vertices.size(); ++v) {
        if (remap[v] == 0) {
            remap[v] = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(base.vertices[v]);
            mesh.base_index.push_back(base.base_index.empty() ? static_cast<int>(v) : base.base_index[v]);
        }
    }
    for (auto& t : mesh.triangles) {
        for (int& v : t) {
            v = remap[static_cast<std::size_t>(v)];
        }
    }
    mesh.rebuild_adjacency();
    tag_edges(mesh, [&](const Vec2& p, const Vec2& q) -> std::string {
        const double tol = 1e-10;
        if (std::abs(dist(p, a) - epsilon) <= tol && std::abs(dist(q, a) - epsilon) <= tol) {
            return "inner-arc";
        }
        if (std::abs(dist(p, center) - radius) <= tol && std::abs(dist(q, center) - radius) <= tol) {
            return "outer";
        }
        return "";
    });
    const auto problem = check_mesh(mesh);
    require(problem.empty(), ErrorKind::MeshGeneration, "cut_puncture: " + problem);
    return mesh;
}

Mesh2D mesh_disk(double radius, const Vec2& a, std::optional<double> epsilon, double h, const Vec2& center)
{
    DiskMeshOptions opts;
    opts.center = center;
    opts.radius = radius;
    opts.a = a;
    opts.h = h;
    if (epsilon) {
        require(*epsilon > 0.0 && *epsilon < radius, ErrorKind::MeshGeneration, "mesh_disk: need 0 < epsilon < radius");
        opts.arcs = {*epsilon};
    }
    Mesh2D base = mesh_disk_base(opts);
    return epsilon ? cut_puncture(base, a, *epsilon, center, radius) : base;
}

Mesh2D mesh_sector(double angle, double radius, double h)
{
    require(angle > 0.0 && angle <= std::numbers::pi, ErrorKind::MeshGeneration, "mesh_sector: angle must lie in (0, pi]");
    require(radius > 0.0 && h > 0.0 && h < radius, ErrorKind::MeshGeneration, "mesh_sector: need 0 < h < radius");
    const double ca = std::cos(angle), sa = std::sin(angle);
    std::vector<Vec2> pts{{0.0, 0.0}};
    std::vector<Constraint> constraints;
    const int nr = static_cast<int>(std::ceil(radius / h));
    const int na = std::max(2, static_cast<int>(std::ceil(angle * radius / h)));
    // ray 0 (excluding apex), arc (including both ends), ray 1 (excluding apex).
    std::vector<int> ray0{0}, ray1{0}, arc;
    for (int i = 1; i < nr; ++i) {
        const double t = radius * i / nr;
        ray0.push_back(static_cast<int>(pts.size()));
        pts.push_back({t, 0.0});
    }
    for (int j = 0; j <= na; ++j) {
        const double t = angle * j / na;
        arc.push_back(static_cast<int>(pts.size()));
        pts.push_back(j == 0 ? Vec2{radius, 0.0} : (j == na ? Vec2{radius * ca, radius * sa}
                                                             : Vec2{radius * std::cos(t), radius * std::sin(t)}));
    }
    ray0.push_back(arc.front());
    for (int i = 1; i < nr; ++i) {
        const double t = radius * i / nr;
        ray1.push_back(static_cast<int>(pts.size()));
        pts.push_back({t * ca, t * sa});
    }
    ray1.push_back(arc.back());
    for (const auto& x : triangular_lattice({-radius, 0.0}, {radius, radius}, h)) {
        const double r = std::hypot(x[0], x[1]);
        const double d0 = x[1];
        const double d1 = x[0] * sa - x[1] * ca;  // distance to the line of ray 1 (positive inside)
        if (r < radius - 0.5 * h && d0 > 0.5 * h && d1 > 0.5 * h) {
            pts.push_back(x);
        }
    }
    for (std::size_t i = 0; i + 1 < ray0.size(); ++i) {
        constraints.push_back({ray0[i], ray0[i + 1], Curve{}});
    }
    for (std::size_t i = 0; i + 1 < ray1.size(); ++i) {
        constraints.push_back({ray1[i], ray1[i + 1], Curve{}});
    }
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
        constraints.push_back({arc[i], arc[i + 1], Curve{true, {0.0, 0.0}, radius}});
    }
    Triangulator tri(pts);
    tri.enforce(constraints);
    Mesh2D mesh = tri.finish();
    tag_edges(mesh, [&](const Vec2& p, const Vec2& q) -> std::string {
        const double tol = 1e-10;
        auto on_ray0 = [&](const Vec2& x) { return std::abs(x[1]) <= tol && x[0] >= -tol; };
        auto on_ray1 = [&](const Vec2& x) { return std::abs(x[0] * sa - x[1] * ca) <= tol; };
        auto on_arc = [&](const Vec2& x) { return std::abs(std::hypot(x[0], x[1]) - radius) <= tol; };
        if (on_ray0(p) && on_ray0(q)) {
            return "ray0";
        }
        if (on_ray1(p) && on_ray1(q)) {
            return "ray1";
        }
        if (on_arc(p) && on_arc(q)) {
            return "arc";
        }
        return "";
    });
    const auto problem = check_mesh(mesh);
    require(problem.empty(), ErrorKind::MeshGeneration, "mesh_sector: " + problem);
    return mesh;
}

namespace {

bool barycentric(const Mesh2D& mesh, std::size_t t, const Vec2& x, std::array<double, 3>& lam)
{
    const auto& tri = mesh.triangles[t];
    const Vec2& a = mesh.vertices[static_cast<std::size_t>(tri[0])];
    const Vec2& b = mesh.vertices[static_cast<std::size_t>(tri[1])];
    const Vec2& c = mesh.vertices[static_cast<std::size_t>(tri[2])];
    const double area = orient(a, b, c);
    lam = {orient(b, c, x) / area, orient(c, a, x) / area, orient(a, b, x) / area};
    return lam[0] >= -1e-12 && lam[1] >= -1e-12 && lam[2] >= -1e-12;
}

}  // namespace

Location locate(const Mesh2D& mesh, const Vec2& x, int start)
{
    require(!mesh.triangles.empty(), ErrorKind::Location, "locate: empty mesh");
    std::array<double, 3> lam{};
    int t = std::clamp(start, 0, static_cast<int>(mesh.triangles.size()) - 1);
    int found = -1;
    const bool have_adjacency = mesh.neighbors.size() == mesh.triangles.size();
    for (std::size_t step = 0; have_adjacency && step < mesh.triangles.size() + 10; ++step) {
        if (barycentric(mesh, static_cast<std::size_t>(t), x, lam)) {
            found = t;
            break;
        }
        // Cross the edge with the most negative coordinate.
        int worst = 0;
        for (int i = 1; i < 3; ++i) {
            if (lam[static_cast<std::size_t>(i)] < lam[static_cast<std::size_t>(worst)]) {
                worst = i;
            }
        }
        const int nb = mesh.neighbors[static_cast<std::size_t>(t)][static_cast<std::size_t>(worst)];
        if (nb < 0) {
            break;
        }
        t = nb;
    }
    if (found < 0) {
        for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
            if (barycentric(mesh, i, x, lam)) {
                found = static_cast<int>(i);
                break;
            }
        }
        require(found >= 0, ErrorKind::Location, "locate: point outside the mesh");
    } else {
        // Lowest index among triangles sharing an edge or vertex with the hit.
        std::array<double, 3> alt{};
        for (const int nb : mesh.neighbors[static_cast<std::size_t>(found)]) {
            if (nb >= 0 && nb < found && barycentric(mesh, static_cast<std::size_t>(nb), x, alt)) {
                found = nb;
            }
        }
        // Vertex hits can be shared by many triangles; settle them by a scan.
        barycentric(mesh, static_cast<std::size_t>(found), x, lam);
        const int zeros = (std::abs(lam[0]) <= 1e-12) + (std::abs(lam[1]) <= 1e-12) + (std::abs(lam[2]) <= 1e-12);
        if (zeros >= 2) {
            for (std::size_t i = 0; i < static_cast<std::size_t>(found); ++i) {
                if (barycentric(mesh, i, x, alt)) {
                    found = static_cast<int>(i);
                    break;
                }
            }
        }
    }
    Location loc;
    loc.triangle = found;
    barycentric(mesh, static_cast<std::size_t>(found), x, loc.barycentric);
    return loc;
}

Interpolated interpolate(const Mesh2D& mesh, const std::vector<double>& values, const Vec2& x)
{
    require(values.size() == mesh.vertices.size(), ErrorKind::Validation, "interpolate: value count mismatch");
    const Location loc = locate(mesh, x);
    const auto& tri = mesh.triangles[static_cast<std::size_t>(loc.triangle)];
    Interpolated out;
    const Vec2& a = mesh.vertices[static_cast<std::size_t>(tri[0])];
    const Vec2& b = mesh.vertices[static_cast<std::size_t>(tri[1])];
    const Vec2& c = mesh.vertices[static_cast<std::size_t>(tri[2])];
    const double u0 = values[static_cast<std::size_t>(tri[0])];
    const double u1 = values[static_cast<std::size_t>(tri[1])];
    const double u2 = values[static_cast<std::size_t>(tri[2])];
    out.value = loc.barycentric[0] * u0 + loc.barycentric[1] * u1 + loc.barycentric[2] * u2;
    // Exact at vertices.
    for (int i = 0; i < 3; ++i) {
        if (mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])] == x) {
            out.value = values[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])];
        }
    }
    const double area2 = orient(a, b, c);
    out.gradient = {(u0 * (b[1] - c[1]) + u1 * (c[1] - a[1]) + u2 * (a[1] - b[1])) / area2,
                    (u0 * (c[0] - b[0]) + u1 * (a[0] - c[0]) + u2 * (b[0] - a[0])) / area2};
    return out;
}

}  // namespace plap::solver

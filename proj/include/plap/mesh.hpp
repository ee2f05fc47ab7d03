#pragma once

#include "plap/core.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace plap::solver {

using Vec2 = std::array<double, 2>;

struct BoundaryEdge {
    std::array<int, 2> nodes{};
    std::string tag;  // "outer", "inner-arc", "ray0", "ray1", "arc"
};

/// Planar triangulation. Triangles are counter-clockwise.
struct Mesh2D {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    /// neighbors[t][i] is the triangle across the edge opposite vertex i, or -1.
    std::vector<std::array<int, 3>> neighbors;
    /// Index of each vertex in the mesh it was cut from (identity otherwise).
    std::vector<int> base_index;

    [[nodiscard]] std::size_t node_count() const noexcept { return vertices.size(); }
    [[nodiscard]] std::vector<int> boundary_nodes() const;
    [[nodiscard]] double triangle_area(std::size_t t) const;

    /// Recomputes `neighbors` and the untagged boundary edge set.
    void rebuild_adjacency();

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Orientation, duplicate and boundary-edge checks. Returns an empty string
/// when the mesh is valid, otherwise a description of the first problem.
std::string check_mesh(const Mesh2D& mesh);

/// Delaunay triangulation of a point set (Bowyer-Watson with a walking
/// locator). The returned mesh has no boundary tags.
Mesh2D delaunay(const std::vector<Vec2>& points);

struct DiskMeshOptions {
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
    std::optional<Vec2> a;       // grading target on the circle
    std::vector<double> arcs;    // radii around a that must appear as exact arcs
    double h = 0.1;
    double grading = 0.5;        // local size = clamp(h |x-a| / grading, h/8, h)
};

/// Graded Delaunay mesh of the full disk. Every radius in `arcs` is realised
/// as a polyline of mesh edges with nodes exactly on |x - a| = radius.
Mesh2D mesh_disk_base(const DiskMeshOptions& opts);

/// Disk minus B_eps(a) cut from a base mesh built with eps among its arcs.
/// Vertices keep their base indices in `base_index`.
Mesh2D cut_puncture(const Mesh2D& base, const Vec2& a, double epsilon, const Vec2& center, double radius);

/// Convenience: mesh of the disk (punctured at a when epsilon is given).
Mesh2D mesh_disk(double radius, const Vec2& a, std::optional<double> epsilon, double h,
                 const Vec2& center = {0.0, 0.0});

/// Sector {0 < arg x < angle, |x| < radius}; tags ray0 (arg 0), ray1 (arg angle), arc.
Mesh2D mesh_sector(double angle, double radius, double h);

struct Location {
    int triangle = -1;
    std::array<double, 3> barycentric{};
};

/// Containing triangle by walking from `start`, with brute-force fallback;
/// on shared edges the lowest triangle index wins. Throws Location.
Location locate(const Mesh2D& mesh, const Vec2& x, int start = 0);

struct Interpolated {
    double value = 0.0;
    Vec2 gradient{};
};

/// P1 interpolation of nodal values.
Interpolated interpolate(const Mesh2D& mesh, const std::vector<double>& values, const Vec2& x);

}  // namespace plap::solver

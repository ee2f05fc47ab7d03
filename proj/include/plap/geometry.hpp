#pragma once

#include "plap/core.hpp"

#include <json.hpp>

#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace plap::geometry {

/// Generalized Euler angles:
///   x_1 = r sin t_{n-1} ... sin t_2 sin t_1
///   x_j = r sin t_{n-1} ... sin t_j cos t_{j-1}   (2 <= j <= n)
/// theta[0] is t_1 in [0, 2pi); theta[j] is t_{j+1} in [0, pi].
struct EulerPoint {
    double r = 0.0;
    std::vector<double> theta;
    bool degenerate = false;  // some sin t_j (j >= 2) vanishes, or r == 0
};

EulerPoint to_euler(const Point& x);
Point from_euler(const EulerPoint& e);

/// Product r * sin t_{n-1} ... sin t_2, i.e. the distance of x to the span of e_3..e_n.
double euler_sine_product(const EulerPoint& e);

struct Ball {
    Point center;
    double radius = 1.0;
};

struct ExteriorBall {
    Point center;
    double radius = 1.0;
};

/// Domain {x : <x, normal> > offset}; normal is the unit inward normal.
struct HalfSpace {
    Point normal;
    double offset = 0.0;
};

/// Planar sector {0 < arg x < angle, |x| < radius} with apex at the origin.
struct Sector {
    double angle = 0.0;
    double radius = 1.0;
};

/// Planar disk minus the ball B_epsilon(a), a on the outer circle.
struct PuncturedDisk {
    Point center;
    double radius = 1.0;
    Point a;
    double epsilon = 0.0;
};

enum class Kind { UnitDisk, Disk, ExteriorDisk, HalfPlane, Sector, PuncturedDisk };

class DomainGeometry {
public:
    using Shape = std::variant<Ball, ExteriorBall, HalfSpace, Sector, PuncturedDisk>;

    static DomainGeometry unit_disk(int n = 2);
    static DomainGeometry disk(const Point& center, double radius);
    static DomainGeometry exterior_disk(const Point& center, double radius);
    static DomainGeometry half_plane(const Point& inward_normal, double offset = 0.0);
    static DomainGeometry sector(double angle, double radius = 1.0);
    static DomainGeometry punctured_disk(const Point& a, double epsilon, double radius = 1.0);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
    [[nodiscard]] int dimension() const noexcept;

    /// Tubular radius beta_0: half the minimal radius of curvature of the boundary.
    [[nodiscard]] double tube_radius() const noexcept;

    [[nodiscard]] nlohmann::json to_json() const;
    static DomainGeometry from_json(const nlohmann::json& j);

private:
    DomainGeometry(Kind kind, Shape shape) : kind_(kind), shape_(std::move(shape)) {}

    Kind kind_;
    Shape shape_;
};

/// Closest boundary point with the outward unit normal there.
struct BoundaryProjection {
    Point point;
    Point normal;
    double signed_distance = 0.0;
    bool at_corner = false;
};

double signed_distance(const DomainGeometry& g, const Point& x);
BoundaryProjection project(const DomainGeometry& g, const Point& x);
bool contains(const DomainGeometry& g, const Point& x);

struct ReflectionData {
    Point projection;
    double signed_distance = 0.0;
    Point image;
    Matrix jacobian;
};

/// Reflection psi(x) = 2 xi_x - x through the boundary, with its Jacobian.
/// Throws OutOfTube when |signed distance| exceeds the tubular radius or the
/// projection falls within a corner cap.
ReflectionData reflect(const DomainGeometry& g, const Point& x);

/// Reflected image only (no Jacobian).
Point reflect_point(const DomainGeometry& g, const Point& x);

/// Central-difference Jacobian of the reflection map.
Matrix reflection_jacobian_fd(const DomainGeometry& g, const Point& x, double step = 1e-6);

inline constexpr double kCornerCap = 1e-3;

}  // namespace plap::geometry

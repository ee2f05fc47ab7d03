#include "plap/geometry.hpp"

#include "plap/json_util.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

namespace plap::geometry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Point planar(double x, double y)
{
    Point p(2);
    p << x, y;
    return p;
}

struct Candidate {
    Point point;
    Point normal;
    double distance = std::numeric_limits<double>::infinity();
    bool corner = false;
};

void consider(Candidate& best, const Point& x, const Point& xi, const Point& normal, bool corner)
{
    const double d = (x - xi).norm();
    if (d < best.distance) {
        best = Candidate{xi, normal, d, corner};
    }
}

/// Closest point of the segment [p0, p1] to x.
Point closest_on_segment(const Point& x, const Point& p0, const Point& p1)
{
    const Point e = p1 - p0;
    const double t = std::clamp((x - p0).dot(e) / e.squaredNorm(), 0.0, 1.0);
    return p0 + t * e;
}

/// Outward normal for a corner point: direction from the corner towards x,
/// oriented so that it points away from the domain.
Point corner_normal(const Point& x, const Point& corner, bool inside)
{
    Point d = x - corner;
    const double len = d.norm();
    if (len == 0.0) {
        return Point::Zero(x.size());
    }
    d /= len;
    return inside ? Point(-d) : d;
}

BoundaryProjection finish(const Candidate& best, bool inside)
{
    BoundaryProjection out;
    out.point = best.point;
    out.normal = best.normal;
    out.signed_distance = inside ? -best.distance : best.distance;
    out.at_corner = best.corner;
    return out;
}

std::array<Point, 2> circle_intersections(const PuncturedDisk& s)
{
    const Point axis = s.a - s.center;
    const double d = axis.norm();
    const Point u = axis / d;
    const Point w = planar(-u[1], u[0]);
    const double along = (s.radius * s.radius - s.epsilon * s.epsilon + d * d) / (2.0 * d);
    const double across = std::sqrt(std::max(0.0, s.radius * s.radius - along * along));
    return {Point(s.center + along * u + across * w), Point(s.center + along * u - across * w)};
}

BoundaryProjection project_ball(const Point& center, double radius, const Point& x, bool exterior)
{
    Point d = x - center;
    double rho = d.norm();
    Point u = Point::Zero(x.size());
    if (rho > 0.0) {
        u = d / rho;
    } else {
        u[0] = 1.0;
    }
    BoundaryProjection out;
    out.point = center + radius * u;
    out.normal = exterior ? Point(-u) : u;
    out.signed_distance = exterior ? radius - rho : rho - radius;
    return out;
}

BoundaryProjection project_sector(const Sector& s, const Point& x)
{
    const double phi_raw = std::atan2(x[1], x[0]);
    const double phi = phi_raw < 0.0 ? phi_raw + kTwoPi : phi_raw;
    const double r = x.norm();
    const bool inside = r < s.radius && phi > 0.0 && phi < s.angle;

    const Point apex = Point::Zero(2);
    const Point end0 = planar(s.radius, 0.0);
    const Point end1 = planar(s.radius * std::cos(s.angle), s.radius * std::sin(s.angle));
    const std::array<Point, 3> corners{apex, end0, end1};

    Candidate best;
    consider(best, x, closest_on_segment(x, apex, end0), planar(0.0, -1.0), false);
    consider(best, x, closest_on_segment(x, apex, end1),
             planar(-std::sin(s.angle), std::cos(s.angle)), false);
    if (r > 0.0 && phi >= 0.0 && phi <= s.angle) {
        consider(best, x, Point(s.radius * x / r), Point(x / r), false);
    }
    for (const auto& c : corners) {
        if ((best.point - c).norm() <= kCornerCap) {
            best.corner = true;
            best.normal = corner_normal(x, c, inside);
        }
    }
    return finish(best, inside);
}

BoundaryProjection project_punctured(const PuncturedDisk& s, const Point& x)
{
    const double to_center = (x - s.center).norm();
    const double to_a = (x - s.a).norm();
    const bool inside = to_center < s.radius && to_a > s.epsilon;

    Candidate best;
    if (to_center > 0.0) {
        const Point xi = s.center + s.radius * (x - s.center) / to_center;
        if ((xi - s.a).norm() >= s.epsilon) {
            consider(best, x, xi, Point((xi - s.center) / s.radius), false);
        }
    }
    if (to_a > 0.0) {
        const Point xi = s.a + s.epsilon * (x - s.a) / to_a;
        if ((xi - s.center).norm() <= s.radius) {
            consider(best, x, xi, Point((s.a - xi) / s.epsilon), false);
        }
    }
    for (const auto& c : circle_intersections(s)) {
        consider(best, x, c, corner_normal(x, c, inside), true);
    }
    if (!best.corner) {
        for (const auto& c : circle_intersections(s)) {
            if ((best.point - c).norm() <= kCornerCap) {
                best.corner = true;
            }
        }
    }
    return finish(best, inside);
}

}  // namespace

EulerPoint to_euler(const Point& x)
{
    const auto n = static_cast<int>(x.size());
    require(n >= 2, ErrorKind::Validation, "to_euler: dimension must be >= 2");
    EulerPoint e;
    e.theta.assign(static_cast<std::size_t>(n - 1), 0.0);
    // partial[m] = |(x_1, ..., x_{m+1})|
    std::vector<double> partial(static_cast<std::size_t>(n));
    partial[0] = std::abs(x[0]);
    for (int m = 1; m < n; ++m) {
        partial[static_cast<std::size_t>(m)] = std::hypot(partial[static_cast<std::size_t>(m - 1)], x[m]);
    }
    e.r = partial.back();
    if (e.r == 0.0) {
        e.degenerate = true;
        return e;
    }
    // t_m = atan2(|(x_1..x_m)|, x_{m+1}) for m >= 2, t_1 = atan2(x_1, x_2).
    for (int m = n - 1; m >= 2; --m) {
        const double s = partial[static_cast<std::size_t>(m - 1)];
        e.theta[static_cast<std::size_t>(m - 1)] = std::atan2(s, x[m]);
        if (s == 0.0) {
            e.degenerate = true;
        }
    }
    double t1 = std::atan2(x[0], x[1]);
    if (t1 < 0.0) {
        t1 += kTwoPi;
    }
    if (t1 >= kTwoPi) {
        t1 = 0.0;
    }
    e.theta[0] = t1;
    return e;
}

Point from_euler(const EulerPoint& e)
{
    const auto n = static_cast<int>(e.theta.size()) + 1;
    require(n >= 2, ErrorKind::Validation, "from_euler: need at least one angle");
    Point x(n);
    double running = e.r;
    for (int j = n; j >= 2; --j) {
        const double t = e.theta[static_cast<std::size_t>(j - 2)];
        x[j - 1] = running * std::cos(t);
        running *= std::sin(t);
    }
    x[0] = running;
    return x;
}

double euler_sine_product(const EulerPoint& e)
{
    double prod = e.r;
    for (std::size_t j = 1; j < e.theta.size(); ++j) {
        prod *= std::sin(e.theta[j]);
    }
    return prod;
}

DomainGeometry DomainGeometry::unit_disk(int n)
{
    require(n >= 2, ErrorKind::Validation, "unit disk: dimension must be >= 2");
    return DomainGeometry(Kind::UnitDisk, Ball{Point::Zero(n), 1.0});
}

DomainGeometry DomainGeometry::disk(const Point& center, double radius)
{
    require(center.size() >= 2, ErrorKind::Validation, "disk: dimension must be >= 2");
    require(radius > 0.0, ErrorKind::Validation, "disk: radius must be positive");
    return DomainGeometry(Kind::Disk, Ball{center, radius});
}

DomainGeometry DomainGeometry::exterior_disk(const Point& center, double radius)
{
    require(center.size() >= 2, ErrorKind::Validation, "exterior disk: dimension must be >= 2");
    require(radius > 0.0, ErrorKind::Validation, "exterior disk: radius must be positive");
    return DomainGeometry(Kind::ExteriorDisk, ExteriorBall{center, radius});
}

DomainGeometry DomainGeometry::half_plane(const Point& inward_normal, double offset)
{
    require(inward_normal.size() >= 2, ErrorKind::Validation, "half-plane: dimension must be >= 2");
    const double len = inward_normal.norm();
    require(len > 0.0, ErrorKind::Validation, "half-plane: normal must be nonzero");
    return DomainGeometry(Kind::HalfPlane, HalfSpace{inward_normal / len, offset / len});
}

DomainGeometry DomainGeometry::sector(double angle, double radius)
{
    require(angle > 0.0 && angle < kTwoPi, ErrorKind::Validation, "sector: angle must lie in (0, 2pi)");
    require(radius > 0.0, ErrorKind::Validation, "sector: radius must be positive");
    return DomainGeometry(Kind::Sector, Sector{angle, radius});
}

DomainGeometry DomainGeometry::punctured_disk(const Point& a, double epsilon, double radius)
{
    require(a.size() == 2, ErrorKind::Validation, "punctured disk: planar only");
    require(radius > 0.0, ErrorKind::Validation, "punctured disk: radius must be positive");
    require(std::abs(a.norm() - radius) <= 1e-12 * radius, ErrorKind::Validation,
            "punctured disk: a must lie on the boundary circle");
    require(epsilon > 0.0 && epsilon < radius, ErrorKind::Validation,
            "punctured disk: need 0 < epsilon < radius");
    return DomainGeometry(Kind::PuncturedDisk, PuncturedDisk{Point::Zero(2), radius, a, epsilon});
}

int DomainGeometry::dimension() const noexcept
{
    return std::visit(
        [](const auto& s) -> int {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Ball> || std::is_same_v<S, ExteriorBall>) {
                return static_cast<int>(s.center.size());
            } else if constexpr (std::is_same_v<S, HalfSpace>) {
                return static_cast<int>(s.normal.size());
            } else {
                return 2;
            }
        },
        shape_);
}

double DomainGeometry::tube_radius() const noexcept
{
    return std::visit(
        [](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HalfSpace>) {
                return std::numeric_limits<double>::infinity();
            } else if constexpr (std::is_same_v<S, PuncturedDisk>) {
                return 0.5 * std::min(s.radius, s.epsilon);
            } else {
                return 0.5 * s.radius;
            }
        },
        shape_);
}

nlohmann::json DomainGeometry::to_json() const
{
    using json_util::from_point;
    nlohmann::json j;
    switch (kind_) {
    case Kind::UnitDisk: {
        j["kind"] = "unit-disk";
        const int n = dimension();
        if (n != 2) {
            j["dimension"] = n;
        }
        break;
    }
    case Kind::Disk: {
        const auto& b = std::get<Ball>(shape_);
        j = {{"kind", "disk"}, {"center", from_point(b.center)}, {"radius", b.radius}};
        break;
    }
    case Kind::ExteriorDisk: {
        const auto& b = std::get<ExteriorBall>(shape_);
        j = {{"kind", "exterior-disk"}, {"center", from_point(b.center)}, {"radius", b.radius}};
        break;
    }
    case Kind::HalfPlane: {
        const auto& h = std::get<HalfSpace>(shape_);
        j = {{"kind", "half-plane"}, {"normal", from_point(h.normal)}, {"offset", h.offset}};
        break;
    }
    case Kind::Sector: {
        const auto& s = std::get<Sector>(shape_);
        j = {{"kind", "sector"}, {"angle", s.angle}, {"radius", s.radius}};
        break;
    }
    case Kind::PuncturedDisk: {
        const auto& s = std::get<PuncturedDisk>(shape_);
        j = {{"kind", "punctured-disk"}, {"a", from_point(s.a)}, {"epsilon", s.epsilon},
             {"radius", s.radius}};
        break;
    }
    }
    return j;
}

DomainGeometry DomainGeometry::from_json(const nlohmann::json& j)
{
    using namespace json_util;
    require(j.is_object() && j.contains("kind") && j.at("kind").is_string(), ErrorKind::Validation,
            "geometry: missing 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "unit-disk") {
        check_keys(j, {"kind", "dimension"}, "unit-disk");
        return unit_disk(get_int_or(j, "dimension", 2));
    }
    if (kind == "disk") {
        check_keys(j, {"kind", "center", "radius"}, "disk");
        return disk(to_point(j.at("center")), get_number(j, "radius"));
    }
    if (kind == "exterior-disk") {
        check_keys(j, {"kind", "center", "radius"}, "exterior-disk");
        return exterior_disk(to_point(j.at("center")), get_number(j, "radius"));
    }
    if (kind == "half-plane") {
        check_keys(j, {"kind", "normal", "offset"}, "half-plane");
        return half_plane(to_point(j.at("normal")), get_number_or(j, "offset", 0.0));
    }
    if (kind == "sector") {
        check_keys(j, {"kind", "angle", "radius"}, "sector");
        return sector(get_number(j, "angle"), get_number_or(j, "radius", 1.0));
    }
    if (kind == "punctured-disk") {
        check_keys(j, {"kind", "a", "epsilon", "radius"}, "punctured-disk");
        return punctured_disk(to_point(j.at("a")), get_number(j, "epsilon"), get_number_or(j, "radius", 1.0));
    }
    fail(ErrorKind::Validation, "geometry: unknown kind '" + kind + "'");
}

BoundaryProjection project(const DomainGeometry& g, const Point& x)
{
    require(x.size() == g.dimension(), ErrorKind::Validation, "geometry: point dimension mismatch");
    return std::visit(
        [&](const auto& s) -> BoundaryProjection {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Ball>) {
                return project_ball(s.center, s.radius, x, false);
            } else if constexpr (std::is_same_v<S, ExteriorBall>) {
                return project_ball(s.center, s.radius, x, true);
            } else if constexpr (std::is_same_v<S, HalfSpace>) {
                BoundaryProjection out;
                out.signed_distance = s.offset - x.dot(s.normal);
                out.point = x + out.signed_distance * s.normal;
                out.normal = -s.normal;
                return out;
            } else if constexpr (std::is_same_v<S, Sector>) {
                return project_sector(s, x);
            } else {
                return project_punctured(s, x);
            }
        },
        g.shape());
}

double signed_distance(const DomainGeometry& g, const Point& x)
{
    return project(g, x).signed_distance;
}

bool contains(const DomainGeometry& g, const Point& x)
{
    return signed_distance(g, x) < 0.0;
}

Point reflect_point(const DomainGeometry& g, const Point& x)
{
    return 2.0 * project(g, x).point - x;
}

Matrix reflection_jacobian_fd(const DomainGeometry& g, const Point& x, double step)
{
    const auto n = x.size();
    Matrix jac(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Point xp = x;
        Point xm = x;
        xp[j] += step;
        xm[j] -= step;
        jac.col(j) = (reflect_point(g, xp) - reflect_point(g, xm)) / (2.0 * step);
    }
    return jac;
}

ReflectionData reflect(const DomainGeometry& g, const Point& x)
{
    const BoundaryProjection proj = project(g, x);
    const double beta0 = g.tube_radius();
    require(std::abs(proj.signed_distance) <= beta0 * (1.0 + 1e-12), ErrorKind::OutOfTube,
            "reflect: point lies outside the tubular neighborhood");
    require(!proj.at_corner, ErrorKind::OutOfTube, "reflect: projection falls in a corner cap");

    ReflectionData out;
    out.projection = proj.point;
    out.signed_distance = proj.signed_distance;
    out.image = 2.0 * proj.point - x;

    const auto n = x.size();
    switch (g.kind()) {
    case Kind::UnitDisk:
    case Kind::Disk:
    case Kind::ExteriorDisk: {
        const auto [center, radius] = std::visit(
            [](const auto& s) -> std::pair<Point, double> {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Ball> || std::is_same_v<S, ExteriorBall>) {
                    return {s.center, s.radius};
                } else {
                    return {Point(), 0.0};
                }
            },
            g.shape());
        const Point d = x - center;
        const double rho = d.norm();
        const Point u = d / rho;
        // psi(x) = c + (2R/rho - 1)(x - c)
        out.jacobian = (2.0 * radius / rho - 1.0) * Matrix::Identity(n, n) - (2.0 * radius / rho) * u * u.transpose();
        break;
    }
    case Kind::HalfPlane: {
        const auto& h = std::get<HalfSpace>(g.shape());
        out.jacobian = Matrix::Identity(n, n) - 2.0 * h.normal * h.normal.transpose();
        break;
    }
    default:
        out.jacobian = reflection_jacobian_fd(g, x);
        break;
    }
    return out;
}

}  // namespace plap::geometry

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plap/io.hpp"
#include "plap/mesh.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace plap;
using namespace plap::solver;

namespace {

constexpr double pi = std::numbers::pi;

double orient2(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

// Positive when d lies strictly inside the circumcircle of ccw (a, b, c).
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const double adx = a[0] - d[0], ady = a[1] - d[1];
    const double bdx = b[0] - d[0], bdy = b[1] - d[1];
    const double cdx = c[0] - d[0], cdy = c[1] - d[1];
    const double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

double total_area(const Mesh2D& m)
{
    double s = 0.0;
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        s += m.triangle_area(t);
    }
    return s;
}

double norm2(const Vec2& v)
{
    return std::hypot(v[0], v[1]);
}

bool throws_kind(const std::function<void()>& f, ErrorKind kind)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

// Brute force: lowest-index triangle whose barycentric coordinates are all >= -1e-12.
int lowest_containing(const Mesh2D& m, const Vec2& x)
{
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        const auto& tri = m.triangles[t];
        const Vec2& a = m.vertices[static_cast<std::size_t>(tri[0])];
        const Vec2& b = m.vertices[static_cast<std::size_t>(tri[1])];
        const Vec2& c = m.vertices[static_cast<std::size_t>(tri[2])];
        const double A = orient2(a, b, c);
        if (orient2(b, c, x) / A >= -1e-12 && orient2(c, a, x) / A >= -1e-12 && orient2(a, b, x) / A >= -1e-12) {
            return static_cast<int>(t);
        }
    }
    return -1;
}

}  // namespace

TEST_CASE("delaunay: empty circumcircles on random points")
{
    io::Random rng(3);
    std::vector<Vec2> pts;
    for (int i = 0; i < 300; ++i) {
        pts.push_back({rng.uniform(), rng.uniform()});
    }
    const auto m = delaunay(pts);
    CHECK(check_mesh(m).empty());
    CHECK(m.node_count() == pts.size());
    int violations = 0;
    for (const auto& tri : m.triangles) {
        const Vec2& a = m.vertices[static_cast<std::size_t>(tri[0])];
        const Vec2& b = m.vertices[static_cast<std::size_t>(tri[1])];
        const Vec2& c = m.vertices[static_cast<std::size_t>(tri[2])];
        for (const auto& d : m.vertices) {
            if (incircle(a, b, c, d) > 1e-12) {
                ++violations;
            }
        }
    }
    CHECK(violations == 0);
    // Euler: T = 2N - 2 - hull vertices, so T <= 2N - 5
    CHECK(m.triangles.size() <= 2 * pts.size() - 5);
}

TEST_CASE("delaunay of a regular grid covers the square")
{
    std::vector<Vec2> pts;
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; j <= 10; ++j) {
            pts.push_back({0.1 * i, 0.1 * j});
        }
    }
    const auto m = delaunay(pts);
    CHECK(check_mesh(m).empty());
    CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.triangles.size() == 200);
}

TEST_CASE("delaunay rejects duplicates and empty input")
{
    CHECK(throws_kind([] { (void)delaunay({{0, 0}, {1, 0}, {0, 1}, {1, 0}}); }, ErrorKind::MeshGeneration));
    CHECK(throws_kind([] { (void)delaunay({}); }, ErrorKind::MeshGeneration));
}

TEST_CASE("unit disk mesh at h = 0.1")
{
    const auto m = mesh_disk(1.0, {1.0, 0.0}, std::nullopt, 0.1);
    CHECK(check_mesh(m).empty());
    CHECK(m.triangles.size() >= 200);
    CHECK(m.triangles.size() <= 1500);
    // inscribed polygon: area below pi, close to it
    CHECK(total_area(m) < pi);
    CHECK(total_area(m) > pi * 0.99);
    for (const int v : m.boundary_nodes()) {
        CHECK(std::abs(norm2(m.vertices[static_cast<std::size_t>(v)]) - 1.0) <= 1e-12);
    }
    for (const auto& e : m.boundary_edges) {
        CHECK(e.tag == "outer");
    }
}

TEST_CASE("punctured disk: inner-arc nodes lie on the circle around a")
{
    const Vec2 a{0.0, 1.0};
    const auto m = mesh_disk(1.0, a, 0.2, 0.05);
    CHECK(check_mesh(m).empty());
    std::set<std::string> tags;
    for (const auto& e : m.boundary_edges) {
        tags.insert(e.tag);
        if (e.tag == "inner-arc") {
            for (const int v : e.nodes) {
                const auto& x = m.vertices[static_cast<std::size_t>(v)];
                CHECK(std::abs(std::hypot(x[0] - a[0], x[1] - a[1]) - 0.2) <= 1e-12);
            }
        }
    }
    CHECK(tags == std::set<std::string>{"inner-arc", "outer"});
    for (const auto& x : m.vertices) {
        CHECK(std::hypot(x[0] - a[0], x[1] - a[1]) >= 0.2 - 1e-12);
    }
}

TEST_CASE("nested punctures share the base mesh")
{
    DiskMeshOptions opts;
    opts.a = Vec2{1.0, 0.0};
    opts.arcs = {0.1, 0.2};
    opts.h = 0.05;
    const auto base = mesh_disk_base(opts);
    const auto coarse = cut_puncture(base, {1.0, 0.0}, 0.2, {0.0, 0.0}, 1.0);
    const auto fine = cut_puncture(base, {1.0, 0.0}, 0.1, {0.0, 0.0}, 1.0);
    std::set<int> fine_base(fine.base_index.begin(), fine.base_index.end());
    for (std::size_t i = 0; i < coarse.node_count(); ++i) {
        const int b = coarse.base_index[i];
        CHECK(fine_base.count(b) == 1);
        CHECK(coarse.vertices[i] == base.vertices[static_cast<std::size_t>(b)]);
    }
    CHECK(fine.node_count() > coarse.node_count());
}

TEST_CASE("grading refines towards a")
{
    const auto m = mesh_disk(1.0, {1.0, 0.0}, std::nullopt, 0.1);
    double near = 1e300, far = 0.0;
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        const auto& tri = m.triangles[t];
        const auto& v = m.vertices[static_cast<std::size_t>(tri[0])];
        const double d = std::hypot(v[0] - 1.0, v[1]);
        if (d < 0.05) {
            near = std::min(near, m.triangle_area(t));
        }
        if (d > 0.8) {
            far = std::max(far, m.triangle_area(t));
        }
    }
    CHECK(near < far / 10.0);
}

TEST_CASE("sector mesh tags and area")
{
    const auto m = mesh_sector(pi / 2, 1.0, 0.05);
    CHECK(check_mesh(m).empty());
    CHECK(total_area(m) == doctest::Approx(pi / 4).epsilon(2e-3));
    for (const auto& e : m.boundary_edges) {
        for (const int v : e.nodes) {
            const auto& x = m.vertices[static_cast<std::size_t>(v)];
            if (e.tag == "ray0") {
                CHECK(x[1] == 0.0);
            } else if (e.tag == "ray1") {
                CHECK(std::abs(x[0]) <= 1e-15);
            } else {
                REQUIRE(e.tag == "arc");
                CHECK(std::abs(norm2(x) - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("infeasible mesh parameters")
{
    CHECK(throws_kind([] { (void)mesh_disk(1.0, {1.0, 0.0}, 1.5, 0.1); }, ErrorKind::MeshGeneration));
    CHECK(throws_kind([] { (void)mesh_disk(1.0, {1.0, 0.0}, std::nullopt, 2.0); }, ErrorKind::MeshGeneration));
    CHECK(throws_kind([] { (void)mesh_disk(1.0, {0.5, 0.0}, 0.1, 0.1); }, ErrorKind::MeshGeneration));
    CHECK(throws_kind([] { (void)mesh_sector(4.0, 1.0, 0.1); }, ErrorKind::MeshGeneration));
}

TEST_CASE("locate: lowest index on shared edges and vertices")
{
    const auto m = mesh_disk(1.0, {1.0, 0.0}, std::nullopt, 0.15);
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        const auto& tri = m.triangles[t];
        const auto& a = m.vertices[static_cast<std::size_t>(tri[0])];
        const auto& b = m.vertices[static_cast<std::size_t>(tri[1])];
        const Vec2 mid{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
        CHECK(locate(m, mid, static_cast<int>(m.triangles.size()) - 1).triangle == lowest_containing(m, mid));
        CHECK(locate(m, a).triangle == lowest_containing(m, a));
    }
    CHECK(throws_kind([&] { (void)locate(m, {2.0, 0.0}); }, ErrorKind::Location));
}

TEST_CASE("P1 interpolation is exact for affine data and at vertices")
{
    const auto m = mesh_sector(pi / 3, 1.0, 0.1);
    std::vector<double> vals;
    for (const auto& x : m.vertices) {
        vals.push_back(0.5 - 2.0 * x[0] + 3.0 * x[1]);
    }
    io::Random rng(8);
    for (int i = 0; i < 100; ++i) {
        const double r = std::sqrt(rng.uniform()) * 0.95;
        const double t = rng.uniform(0.01, pi / 3 - 0.01);
        const Vec2 x{r * std::cos(t), r * std::sin(t)};
        const auto ip = interpolate(m, vals, x);
        CHECK(ip.value == doctest::Approx(0.5 - 2.0 * x[0] + 3.0 * x[1]).epsilon(1e-12));
        CHECK(ip.gradient[0] == doctest::Approx(-2.0).epsilon(1e-10));
        CHECK(ip.gradient[1] == doctest::Approx(3.0).epsilon(1e-10));
    }
    std::vector<double> rough(m.node_count());
    for (std::size_t i = 0; i < rough.size(); ++i) {
        rough[i] = std::sin(37.0 * static_cast<double>(i));
    }
    for (std::size_t i = 0; i < m.node_count(); ++i) {
        CHECK(interpolate(m, rough, m.vertices[i]).value == rough[i]);
    }
}

TEST_CASE("mesh json")
{
    const auto m = mesh_sector(pi / 2, 1.0, 0.25);
    const auto j = m.to_json();
    CHECK(j.at("vertices").size() == m.node_count());
    CHECK(j.at("triangles").size() == m.triangles.size());
}

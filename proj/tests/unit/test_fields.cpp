#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plap/fields.hpp"
#include "plap/geometry.hpp"
#include "plap/io.hpp"
#include "plap/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace plap;
using namespace plap::fields;

namespace {

Point pt(std::initializer_list<double> xs)
{
    Point x(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double v : xs) {
        x[i++] = v;
    }
    return x;
}

Point random_point(io::Random& rng, int n, double scale)
{
    Point x(n);
    for (int i = 0; i < n; ++i) {
        x[i] = rng.uniform(-scale, scale);
    }
    return x;
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

// Analytic gradient against central differences at random points away from singular sets.
void check_gradient(const ScalarField& u, double scale, std::uint64_t seed)
{
    io::Random rng(seed);
    int checked = 0;
    while (checked < 50) {
        const Point x = random_point(rng, u.dimension(), scale);
        if (u.singular_distance(x) < 0.2) {
            continue;
        }
        const auto fv = u.evaluate(x);
        const Point fd = u.gradient_fd(x);
        CAPTURE(u.description());
        CHECK((fv.gradient - fd).norm() <= 1e-6 * (1.0 + fv.gradient.norm()));
        ++checked;
    }
}

spectral::SpectralPair pair(double p, int k)
{
    return spectral::tabulate(p, k, kDefaultProfileNodes, profile_tolerances());
}

}  // namespace

TEST_CASE("analytic gradients agree with central differences")
{
    check_gradient(coordinate_field(2, 3), 2.0, 1);
    check_gradient(chi_field(1, 3), 2.0, 2);
    check_gradient(ball_interior_field(2, pt({0.0, 1.0})), 2.0, 3);
    check_gradient(ball_exterior_field(3, pt({1.0, 0.0, 0.0})), 2.0, 4);
    check_gradient(poisson_kernel(pt({1.0, 1.0}), pt({0.0, 1.0})), 2.0, 5);
    check_gradient(separable_2d(pair(3.0, 2)), 2.0, 6);
    check_gradient(separable_nd(pair(3.0, 2), 4), 2.0, 7);
    check_gradient(separable_singular(pair(3.0, 2), 3), 2.0, 8);
    check_gradient(invert_field(chi_field(2, 2), pt({0.3, 0.1}), 2.0), 2.0, 9);
    check_gradient(blowup_field(ball_interior_field(2, pt({1.0, 0.0})), pt({1.0, 0.0}), 0.1), 2.0, 10);
}

TEST_CASE("explicit formulas")
{
    const Point x = pt({0.3, -0.2});
    CHECK(coordinate_field(2, 2).value(x) == doctest::Approx(-0.2));
    CHECK(chi_field(1, 2).value(x) == doctest::Approx(0.3 / 0.13));
    const Point a = pt({1.0, 0.0});
    const double ui = (1.0 - 0.13) / (2.0 * ((0.3 - 1.0) * (0.3 - 1.0) + 0.04));
    CHECK(ball_interior_field(2, a).value(x) == doctest::Approx(ui));
    CHECK(ball_exterior_field(2, a).value(x) == doctest::Approx(-ui));
    CHECK(poisson_kernel(a, pt({0.0, 0.0})).value(x) == doctest::Approx(2.0 * ui));
    CHECK(square_norm_field(2).value(x) == doctest::Approx(0.13));
}

TEST_CASE("ball fields vanish on the sphere and are positive on their side")
{
    const Point a = pt({0.0, 0.0, 1.0});
    const auto ui = ball_interior_field(3, a);
    const auto ue = ball_exterior_field(3, a);
    io::Random rng(3);
    for (int i = 0; i < 100; ++i) {
        Point s = random_point(rng, 3, 1.0).normalized();
        if ((s - a).norm() < 1e-2) {
            continue;
        }
        CHECK(std::abs(ui.value(s)) <= 1e-14);
        CHECK(ui.value(0.5 * s) > 0.0);
        CHECK(ue.value(2.0 * s) > 0.0);
    }
    CHECK(throws_kind([&] { (void)ui.value(a); }, ErrorKind::SingularPoint));
}

TEST_CASE("separable 2D at p = 2 is r^k sin(k theta) / k")
{
    const auto u = separable_2d(pair(2.0, 2));
    io::Random rng(4);
    for (int i = 0; i < 50; ++i) {
        const Point x = random_point(rng, 2, 1.5);
        // r^2 sin(2 theta) / 2 = x1 x2
        CHECK(std::abs(u.value(x) - x[0] * x[1]) <= 1e-9);
    }
}

TEST_CASE("separable nD at p = 2, k = 1 is x1")
{
    const auto u = separable_nd(pair(2.0, 1), 3);
    io::Random rng(5);
    for (int i = 0; i < 50; ++i) {
        const Point x = random_point(rng, 3, 1.5);
        CHECK(std::abs(u.value(x) - x[0]) <= 1e-9);
    }
}

TEST_CASE("separable fields are homogeneous")
{
    const auto u = separable_2d(pair(3.0, 2));
    const auto v = separable_singular(pair(3.0, 2), 3);
    const double beta = spectral::beta_closed_form(3.0, 2);
    const Point x = pt({0.4, 0.7});
    CHECK(u.value(2.0 * x) == doctest::Approx(std::pow(2.0, beta) * u.value(x)).epsilon(1e-10));
    const Point y = pt({0.4, 0.7, -0.3});
    CHECK(v.value(2.0 * y) == doctest::Approx(std::pow(2.0, -beta) * v.value(y)).epsilon(1e-10));
}

TEST_CASE("inversion of a coordinate is chi")
{
    const auto u = invert_field(coordinate_field(2, 3), Point::Zero(3), 1.0);
    const auto chi = chi_field(2, 3);
    io::Random rng(6);
    for (int i = 0; i < 30; ++i) {
        const Point x = random_point(rng, 3, 2.0);
        if (x.norm() < 0.1) {
            continue;
        }
        CHECK(u.value(x) == doctest::Approx(chi.value(x)).epsilon(1e-13));
    }
    CHECK(u.singular_distance(pt({0.0, 0.0, 0.5})) == doctest::Approx(0.5));
}

TEST_CASE("scale and blow-up")
{
    const auto u = ball_interior_field(2, pt({1.0, 0.0}));
    const Point x = pt({0.2, 0.1});
    CHECK(scale_field(u, -3.0).value(x) == doctest::Approx(-3.0 * u.value(x)));
    const auto b = blowup_field(u, pt({1.0, 0.0}), 0.05);
    const Point y = pt({-0.6, 0.3});
    CHECK(b.value(y) == doctest::Approx(0.05 * u.value(pt({1.0 - 0.03, 0.015}))));
}

TEST_CASE("odd extension through the unit circle")
{
    const auto g = geometry::DomainGeometry::unit_disk();
    const auto u = ball_interior_field(2, pt({1.0, 0.0}));
    const auto e = extend_field(u, g);
    const Point inside = pt({0.0, 0.8});
    const Point outside = pt({0.0, 1.2});
    CHECK(e.value(inside) == doctest::Approx(u.value(inside)));
    CHECK(e.value(outside) == doctest::Approx(-u.value(inside)));
    // continuous across the boundary
    CHECK(std::abs(e.value(pt({0.0, 1.0 + 1e-9}))) <= 1e-8);
}

TEST_CASE("descriptors")
{
    const auto u = make_field(nlohmann::json::parse(R"({"type":"ball_interior","a":[1,0]})"));
    CHECK(u.dimension() == 2);
    CHECK(u.value(pt({0.0, 0.0})) == doctest::Approx(0.5));
    const auto inv = make_field(
        nlohmann::json::parse(R"({"type":"invert","field":{"type":"coordinate","axis":1,"n":2},"center":[0,0],"power":1})"));
    CHECK(inv.value(pt({0.5, 0.5})) == doctest::Approx(1.0));
    const auto sep = make_field(nlohmann::json::parse(R"({"type":"separable_2d","p":3,"k":2})"));
    CHECK(sep.p() == 3.0);
    CHECK(throws_kind([] { (void)make_field(nlohmann::json::parse(R"({"type":"nope"})")); }, ErrorKind::Validation));
    CHECK(throws_kind([] { (void)make_field(nlohmann::json::parse(R"({"type":"chi","axis":1,"n":2,"zz":1})")); },
                      ErrorKind::Validation));
    CHECK(throws_kind([] { (void)chi_field(3, 2); }, ErrorKind::Validation));
    CHECK(throws_kind([] { (void)ball_interior_field(2, pt({2.0, 0.0})); }, ErrorKind::Validation));
    CHECK(throws_kind([] { (void)separable_singular(pair(3.0, 2), 2); }, ErrorKind::Validation));
}

TEST_CASE("sample csv")
{
    const auto csv = sample_csv(coordinate_field(1, 2), {pt({0.5, 0.25})});
    CHECK(csv == "x1,x2,value,grad1,grad2\n0.5,0.25,0.5,1,0\n");
}

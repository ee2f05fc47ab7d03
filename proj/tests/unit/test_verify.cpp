#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plap/fields.hpp"
#include "plap/geometry.hpp"
#include "plap/io.hpp"
#include "plap/spectral.hpp"
#include "plap/verify.hpp"

#include <cmath>
#include <numbers>

using namespace plap;
using namespace plap::verify;

namespace {

constexpr double pi = std::numbers::pi;

Point pt(std::initializer_list<double> xs)
{
    Point x(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double v : xs) {
        x[i++] = v;
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

spectral::SpectralPair pair(double p, int k)
{
    return spectral::tabulate(p, k, fields::kDefaultProfileNodes, fields::profile_tolerances());
}

}  // namespace

TEST_CASE("affine fields have zero residual at any step")
{
    const auto u = fields::coordinate_field(2, 2);
    for (double h : {1e-1, 1e-3}) {
        for (double p : {1.5, 2.0, 4.0}) {
            CHECK(std::abs(plaplace_residual(u, p, pt({0.3, -0.7}), h).residual) <= 1e-12);
        }
    }
}

TEST_CASE("poisson kernel is harmonic")
{
    const auto u = fields::poisson_kernel(pt({1.0, 0.0}), pt({0.0, 0.0}));
    CHECK(std::abs(plaplace_residual(u, 2.0, pt({0.3, 0.2}), 1e-3).residual) <= 1e-5);
}

TEST_CASE("ball interior field is 3-harmonic in 3D")
{
    const auto u = fields::ball_interior_field(3, pt({1.0, 0.0, 0.0}));
    const auto rep = plaplace_residual(u, 3.0, pt({0.3, 0.2, 0.1}), 1e-3);
    CHECK(std::abs(rep.normalized) <= 1e-4);
    CHECK(rep.pass);
}

TEST_CASE("square norm is a negative control: residual 2n at p = 2")
{
    for (int n : {2, 3}) {
        const auto u = fields::square_norm_field(n);
        Point x = Point::Constant(n, 0.4);
        const auto rep = plaplace_residual(u, 2.0, x, 1e-3);
        CHECK(rep.residual == doctest::Approx(2.0 * n).epsilon(1e-6));
        CHECK_FALSE(rep.pass);
        const auto conv = convergence_order(u, 2.0, x, {1e-2, 5e-3, 2.5e-3});
        CHECK(std::abs(conv.slope) <= 0.05);
    }
}

TEST_CASE("convergence order of central differences is 2")
{
    const auto u = fields::separable_2d(pair(3.0, 2));
    const auto conv = convergence_order(u, 3.0, pt({0.7, 0.4}), {1e-2, 5e-3, 2.5e-3});
    CHECK_FALSE(conv.skipped);
    CHECK(conv.slope >= 1.9);
    // x1 x2 at p = 2: residuals sit at the rounding floor
    const auto w = fields::ScalarField(
        2, [](const Point& x) { return fields::FieldValue{x[0] * x[1], pt({x[1], x[0]})}; }, "x1 x2");
    CHECK(convergence_order(w, 2.0, pt({0.7, 0.4}), {1e-2, 5e-3, 2.5e-3}).skipped);
}

TEST_CASE("residual preconditions")
{
    const auto chi = fields::chi_field(1, 2);
    CHECK(throws_kind([&] { (void)plaplace_residual(chi, 2.0, pt({0.005, 0.0}), 1e-3); }, ErrorKind::Exclusion));
    const auto sq = fields::square_norm_field(2);
    CHECK(throws_kind([&] { (void)plaplace_residual(sq, 2.0, pt({0.0, 0.0}), 1e-3); }, ErrorKind::DegenerateGradient));
    CHECK(throws_kind([&] { (void)convergence_order(sq, 2.0, pt({0.5, 0.5}), {1e-2, 5e-3}); }, ErrorKind::Validation));
}

TEST_CASE("spherical reduction")
{
    const auto p21 = pair(2.0, 1);
    CHECK(std::abs(spherical_residual_3d(p21, 1.0, 1.0, 0.4, 1e-3)) <= 1e-6);
    const auto p32 = pair(3.0, 2);
    CHECK(std::abs(spherical_residual_3d(p32, p32.beta, 1.0, 0.4, 1e-3)) <= 1e-4);
    // a wrong exponent leaves a residual
    CHECK(std::abs(spherical_residual_3d(p32, p32.beta + 0.1, 1.0, 0.4, 1e-3)) > 1e-3);
    CHECK(throws_kind([&] { (void)spherical_residual_3d(p21, 1.0, 0.01, 0.4, 1e-3); }, ErrorKind::Exclusion));
}

TEST_CASE("direction fan lies in the open inward half-plane")
{
    const Point n = pt({0.6, 0.8});
    const auto fan = direction_fan(n, 32);
    CHECK(fan.size() == 32);
    for (const auto& s : fan) {
        CHECK(s.norm() == doctest::Approx(1.0));
        CHECK(s.dot(n) < 0.0);
    }
}

TEST_CASE("boundary limit of the ball kernel is -<sigma, n>")
{
    const Point a = pt({1.0, 0.0});
    const auto u = fields::ball_interior_field(2, a);
    const auto lim = boundary_limit(u, a, a, direction_fan(a, 8), {2e-3, 1e-3});
    for (const auto& l : lim) {
        CHECK(l.expected == doctest::Approx(-l.direction.dot(a)));
        CHECK(l.error <= 1e-3);
    }
    // the plain Poisson kernel has twice the limit
    const auto pk = fields::poisson_kernel(a, pt({0.0, 0.0}));
    const auto lim2 = boundary_limit(pk, a, a, direction_fan(a, 4), {2e-3, 1e-3});
    CHECK(lim2[0].estimate == doctest::Approx(2.0 * lim2[0].expected).epsilon(1e-3));
}

TEST_CASE("blow-up converges linearly")
{
    const Point a = pt({0.0, 1.0});
    const auto e = fields::extend_field(fields::ball_interior_field(2, a), geometry::DomainGeometry::unit_disk());
    std::vector<Point> ys;
    for (int i = 0; i < 16; ++i) {
        ys.push_back(pt({std::cos(0.4 * i + 0.1), std::sin(0.4 * i + 0.1)}));
    }
    const auto b = blowup_convergence(e, a, a, ys, {0.1, 0.05, 0.025});
    CHECK(b.errors[2] < b.errors[1]);
    CHECK(b.errors[1] < b.errors[0]);
    CHECK(b.slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("growth bounds: U^i sits between the tangent-ball bounds")
{
    const Point a = pt({1.0, 0.0});
    const auto g = geometry::DomainGeometry::unit_disk();
    io::Random rng(9);
    std::vector<Point> samples;
    while (samples.size() < 300) {
        const Point x = pt({rng.uniform(-1, 1), rng.uniform(-1, 1)});
        if (x.norm() < 0.999 && (x - a).norm() > 1e-2) {
            samples.push_back(x);
        }
    }
    // on the unit disk both tangent balls touch, so the lower bound is U^i itself
    const auto rep = growth_bounds_check(fields::ball_interior_field(2, a), a, g, samples);
    CHECK(rep.pass);
    CHECK(rep.lower_checked > 0);
    CHECK(rep.upper_violations == 0);
    // V^e - U^i = 1 here, so 3 U^i crosses the upper bound near a
    const auto bad = growth_bounds_check(fields::scale_field(fields::ball_interior_field(2, a), 3.0), a, g, samples);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("transformed coefficients")
{
    const auto g = geometry::DomainGeometry::unit_disk();
    const Point eta = pt({0.3, -1.2});
    for (double p : {1.5, 2.0, 3.0}) {
        // untransformed inside
        const auto in = transformed_coefficients(g, p, pt({0.95, 0.0}));
        CHECK_FALSE(in.transformed());
        CHECK((in.apply(eta) - std::pow(eta.norm(), p - 2.0) * eta).norm() <= 1e-14);
        const auto out = transformed_coefficients(g, p, pt({0.0, 1.05}));
        CHECK(out.transformed());
        CHECK(out.apply(Point::Zero(2)).norm() == 0.0);
    }
    // at p = 2 the derivative is constant in eta
    const auto c = transformed_coefficients(g, 2.0, pt({0.0, 1.05}));
    CHECK((c.derivative(eta) - c.derivative(pt({2.0, 0.5}))).norm() <= 1e-6);
}

TEST_CASE("reflection check on the unit disk")
{
    const auto g = geometry::DomainGeometry::unit_disk();
    io::Random rng(4);
    std::vector<Point> xs, etas, xis;
    for (int i = 0; i < 50; ++i) {
        const double t = rng.uniform(0.0, 2.0 * pi);
        const double r = rng.uniform(0.9, 1.1);
        xs.push_back(pt({r * std::cos(t), r * std::sin(t)}));
    }
    for (int i = 0; i < 6; ++i) {
        etas.push_back(pt({std::cos(i + 0.2), 2.0 * std::sin(i + 0.2)}));
        xis.push_back(pt({std::cos(2.0 * i), std::sin(2.0 * i)}));
    }
    for (double p : {1.5, 2.0, 3.0}) {
        const auto rc = reflection_check(g, p, xs, etas, xis);
        CHECK(rc.pass);
        CHECK(rc.max_zero_value == 0.0);
        CHECK(rc.max_boundary_deviation <= 1e-10);
        CHECK(rc.required_lower == doctest::Approx(0.5 * std::min(1.0, p - 1.0)));
        CHECK(rc.ellipticity.lower >= rc.required_lower);
        CHECK(rc.ellipticity.upper >= rc.ellipticity.lower);
    }
}

TEST_CASE("ratio diagnostic: poisson kernel over U^i is 2")
{
    const Point a = pt({1.0, 0.0});
    std::vector<Point> s{pt({0.1, 0.2}), pt({-0.5, 0.3}), pt({0.7, -0.1})};
    const auto r = ratio_diagnostic(fields::poisson_kernel(a, pt({0.0, 0.0})), fields::ball_interior_field(2, a), s);
    CHECK(r.mean == doctest::Approx(2.0));
    CHECK(r.max_deviation <= 1e-14);
}

TEST_CASE("ellipticity at boundary points is the p-Laplacian's min(1, p - 1)")
{
    const auto g = geometry::DomainGeometry::unit_disk();
    std::vector<Point> xs, etas, xis;
    for (int i = 0; i < 8; ++i) {
        xs.push_back(pt({std::cos(0.8 * i), std::sin(0.8 * i)}));
        etas.push_back(pt({std::cos(1.3 * i + 0.1), std::sin(1.3 * i + 0.1)}));
        xis.push_back(pt({std::cos(0.7 * i + 0.4), std::sin(0.7 * i + 0.4)}));
    }
    for (double p : {1.5, 2.0, 3.0}) {
        const auto e = ellipticity_sample(g, p, xs, etas, xis);
        CAPTURE(p);
        CHECK(e.lower == doctest::Approx(std::min(1.0, p - 1.0)).epsilon(1e-5));
        CHECK(e.positive);
    }
}

TEST_CASE("ratio diagnostic: constant multiples and a negative control")
{
    const auto v = fields::poisson_kernel(pt({1.0, 0.0}), pt({0.0, 0.0}));
    std::vector<Point> s{pt({0.1, 0.2}), pt({-0.5, 0.3}), pt({0.7, -0.1}), pt({0.0, 0.6})};
    const auto r = ratio_diagnostic(fields::scale_field(v, 3.0), v, s);
    CHECK(r.mean == doctest::Approx(3.0));
    CHECK(r.max_deviation <= 1e-12);
    const auto c = ratio_diagnostic(fields::chi_field(2, 2), v, s);
    CHECK(c.max_deviation > 1e-2);
}

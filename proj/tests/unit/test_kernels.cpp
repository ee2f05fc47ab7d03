#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plap/io.hpp"
#include "plap/kernels.hpp"

#include <cmath>
#include <cstring>
#include <string>

using namespace plap::kernels;

namespace {

// Random elements over n nodes. Some elements get zero gradient when u is constant on them.
ElementBatch random_batch(std::size_t count, int nodes, plap::io::Random& rng)
{
    ElementBatch b;
    for (std::size_t e = 0; e < count; ++e) {
        b.i0.push_back(static_cast<std::int32_t>(rng.uniform() * nodes));
        b.i1.push_back(static_cast<std::int32_t>(rng.uniform() * nodes));
        b.i2.push_back(static_cast<std::int32_t>(rng.uniform() * nodes));
        b.area.push_back(rng.uniform(1e-4, 1e-2));
        // hat gradients sum to zero
        const double x0 = rng.uniform(-20, 20), x1 = rng.uniform(-20, 20);
        const double y0 = rng.uniform(-20, 20), y1 = rng.uniform(-20, 20);
        b.bx0.push_back(x0);
        b.bx1.push_back(x1);
        b.bx2.push_back(-x0 - x1);
        b.by0.push_back(y0);
        b.by1.push_back(y1);
        b.by2.push_back(-y0 - y1);
    }
    return b;
}

double rel(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace

TEST_CASE("scalar kernel against direct formulas")
{
    plap::io::Random rng(1);
    const auto b = random_batch(64, 20, rng);
    std::vector<double> u(20);
    for (auto& v : u) {
        v = rng.uniform(-1, 1);
    }
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        for (double delta : {0.0, 1e-2}) {
            ElementResult r;
            evaluate_scalar(b, u.data(), delta * delta, p, r);
            for (std::size_t e = 0; e < b.size(); ++e) {
                const double gx = u[b.i0[e]] * b.bx0[e] + u[b.i1[e]] * b.bx1[e] + u[b.i2[e]] * b.bx2[e];
                const double gy = u[b.i0[e]] * b.by0[e] + u[b.i1[e]] * b.by1[e] + u[b.i2[e]] * b.by2[e];
                const double norm = std::sqrt(std::hypot(gx, gy) * std::hypot(gx, gy) + delta * delta);
                CHECK(r.gx[e] == gx);
                CHECK(r.gy[e] == gy);
                if (norm == 0.0) {
                    continue;
                }
                CHECK(rel(r.energy[e], b.area[e] * std::pow(norm, p) / p) <= 1e-13);
                CHECK(rel(r.coef1[e], b.area[e] * std::pow(norm, p - 2.0)) <= 1e-13);
                CHECK(rel(r.coef2[e], (p - 2.0) * b.area[e] * std::pow(norm, p - 4.0)) <= 1e-13);
            }
        }
    }
}

TEST_CASE("zero gradient elements")
{
    ElementBatch b;
    b.i0 = {0};
    b.i1 = {1};
    b.i2 = {2};
    b.area = {0.5};
    b.bx0 = {1};
    b.bx1 = {-1};
    b.bx2 = {0};
    b.by0 = {0};
    b.by1 = {1};
    b.by2 = {-1};
    const std::vector<double> u{3.0, 3.0, 3.0};
    ElementResult r;
    evaluate_scalar(b, u.data(), 0.0, 2.0, r);
    CHECK(r.energy[0] == 0.0);
    CHECK(r.coef1[0] == 0.5);
    CHECK(r.coef2[0] == 0.0);
    evaluate_scalar(b, u.data(), 0.0, 4.0, r);
    CHECK(r.coef1[0] == 0.0);
    evaluate_scalar(b, u.data(), 0.0, 1.5, r);
    CHECK(r.coef1[0] == doctest::Approx(0.5 * std::pow(kZeroFloor, -0.25)));
    CHECK(std::isfinite(r.coef1[0]));
}

TEST_CASE("AVX2 kernel matches the scalar reference")
{
    if (!avx2_available()) {
        MESSAGE("AVX2/FMA not available, skipping");
        return;
    }
    plap::io::Random rng(2);
    // sizes not divisible by 4 exercise the tail
    for (std::size_t count : {1u, 3u, 4u, 37u, 1000u}) {
        const auto b = random_batch(count, 50, rng);
        std::vector<double> u(50);
        for (std::size_t i = 0; i < u.size(); ++i) {
            // a few repeated values give zero-gradient elements
            u[i] = i % 7 == 0 ? 1.0 : rng.uniform(-2, 2);
        }
        for (double p : {1.2, 1.5, 2.0, 3.0, 4.0, 10.0}) {
            for (double delta2 : {0.0, 1e-4, 1e-16}) {
                ElementResult s, v;
                evaluate_scalar(b, u.data(), delta2, p, s);
                evaluate_avx2(b, u.data(), delta2, p, v);
                for (std::size_t e = 0; e < count; ++e) {
                    CHECK(std::memcmp(&s.gx[e], &v.gx[e], sizeof(double)) == 0);
                    CHECK(std::memcmp(&s.gy[e], &v.gy[e], sizeof(double)) == 0);
                    CHECK(rel(s.energy[e], v.energy[e]) <= 1e-13);
                    CHECK(rel(s.coef1[e], v.coef1[e]) <= 1e-13);
                    CHECK(rel(s.coef2[e], v.coef2[e]) <= 1e-13);
                }
            }
        }
    }
}

TEST_CASE("AVX2 special lanes fall back to scalar")
{
    if (!avx2_available()) {
        return;
    }
    plap::io::Random rng(3);
    auto b = random_batch(8, 8, rng);
    // huge gradients push s^{(p-2)/2} outside the vector exp range
    std::vector<double> u{1e150, -1e150, 0.0, 1.0, 2.0, 1e-170, 0.0, 3.0};
    ElementResult s, v;
    evaluate_scalar(b, u.data(), 0.0, 10.0, s);
    evaluate_avx2(b, u.data(), 0.0, 10.0, v);
    for (std::size_t e = 0; e < 8; ++e) {
        const bool same = (std::isinf(s.coef1[e]) && std::isinf(v.coef1[e])) || rel(s.coef1[e], v.coef1[e]) <= 1e-13;
        CHECK(same);
    }
}

TEST_CASE("dispatch reports a known variant")
{
    const std::string name = isa_name(active_isa());
    CHECK((name == "scalar" || name == "avx2"));
    if (!avx2_available()) {
        CHECK(active_isa() == Isa::Scalar);
    }
}

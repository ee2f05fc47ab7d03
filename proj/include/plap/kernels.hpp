#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace plap::kernels {

/// Per-element P1 data in structure-of-arrays layout. b{x,y}{0,1,2} are the
/// gradients of the three hat functions on the element.
struct ElementBatch {
    std::vector<std::int32_t> i0, i1, i2;
    std::vector<double> area;
    std::vector<double> bx0, bx1, bx2;
    std::vector<double> by0, by1, by2;

    [[nodiscard]] std::size_t size() const noexcept { return area.size(); }
};

/// With g the element gradient and s = |g|^2 + delta^2:
///   energy = area s^{p/2} / p
///   coef1  = area s^{(p-2)/2}        (gradient and Hessian scalar part)
///   coef2  = (p-2) coef1 / s         (rank-one Hessian part)
/// At s = 0 the energy, gradient and rank-one part vanish; coef1 is area for
/// p = 2, 0 for p > 2, and is evaluated at s = kZeroFloor for p < 2.
struct ElementResult {
    std::vector<double> energy, coef1, coef2, gx, gy;
    void resize(std::size_t n);
};

inline constexpr double kZeroFloor = 1e-20;

enum class Isa { Scalar, Avx2 };

void evaluate_scalar(const ElementBatch& batch, const double* u, double delta2, double p, ElementResult& out);
/// Throws Validation when the CPU lacks AVX2/FMA.
void evaluate_avx2(const ElementBatch& batch, const double* u, double delta2, double p, ElementResult& out);

/// Runtime-selected variant: AVX2 when available, overridable with
/// PLAP_KERNELS=scalar|avx2.
void evaluate(const ElementBatch& batch, const double* u, double delta2, double p, ElementResult& out);

bool avx2_available();
Isa active_isa();
const char* isa_name(Isa isa);

namespace detail {
/// Single-element reference used by both variants for special lanes.
void element_scalar(const ElementBatch& b, std::size_t e, const double* u, double delta2, double p, ElementResult& out);
}  // namespace detail

}  // namespace plap::kernels

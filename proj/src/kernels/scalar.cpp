#include "plap/kernels.hpp"

#include <cmath>

namespace plap::kernels {

void ElementResult::resize(std::size_t n)
{
    energy.resize(n);
    coef1.resize(n);
    coef2.resize(n);
    gx.resize(n);
    gy.resize(n);
}

namespace detail {

void element_scalar(const ElementBatch& b, std::size_t e, const double* u, double delta2, double p, ElementResult& out)
{
    const double u0 = u[b.i0[e]];
    const double u1 = u[b.i1[e]];
    const double u2 = u[b.i2[e]];
    const double gx = u0 * b.bx0[e] + u1 * b.bx1[e] + u2 * b.bx2[e];
    const double gy = u0 * b.by0[e] + u1 * b.by1[e] + u2 * b.by2[e];
    const double s = gx * gx + gy * gy + delta2;
    out.gx[e] = gx;
    out.gy[e] = gy;
    if (s > 0.0) {
        const double c1 = b.area[e] * std::pow(s, 0.5 * (p - 2.0));
        out.coef1[e] = c1;
        out.coef2[e] = (p - 2.0) * c1 / s;
        out.energy[e] = c1 * s / p;
        return;
    }
    out.energy[e] = 0.0;
    out.coef2[e] = 0.0;
    if (p == 2.0) {
        out.coef1[e] = b.area[e];
    } else if (p > 2.0) {
        out.coef1[e] = 0.0;
    } else {
        out.coef1[e] = b.area[e] * std::pow(kZeroFloor, 0.5 * (p - 2.0));
    }
}

}  // namespace detail

void evaluate_scalar(const ElementBatch& batch, const double* u, double delta2, double p, ElementResult& out)
{
    out.resize(batch.size());
    for (std::size_t e = 0; e < batch.size(); ++e) {
        detail::element_scalar(batch, e, u, delta2, p, out);
    }
}

}  // namespace plap::kernels

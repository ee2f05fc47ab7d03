#include "plap/verify.hpp"

#include "plap/json_util.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace plap::verify {

namespace {

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys)
{
    const auto m = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

}  // namespace

nlohmann::json ResidualReport::to_json() const
{
    return {{"point", json_util::from_point(point)},
            {"h", h},
            {"residual", residual},
            {"gradient_norm", gradient_norm},
            {"normalized", normalized},
            {"pass", pass}};
}

ResidualReport plaplace_residual(const fields::ScalarField& u, double p, const Point& x, double h, double threshold)
{
    require(p > 1.0 && std::isfinite(p), ErrorKind::Validation, "plaplace_residual: p must exceed 1");
    require(h > 0.0, ErrorKind::Validation, "plaplace_residual: step must be positive");
    require(u.singular_distance(x) >= 10.0 * h, ErrorKind::Exclusion,
            "plaplace_residual: point within 10h of a singular point");
    const int n = u.dimension();
    const double f0 = u.value(x);
    Point du(n);
    Matrix d2(n, n);
    Point xp = x, xm = x;
    for (int i = 0; i < n; ++i) {
        xp[i] += h;
        xm[i] -= h;
        const double fp = u.value(xp);
        const double fm = u.value(xm);
        du[i] = (fp - fm) / (2.0 * h);
        d2(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Point y = x;
            y[i] += h;
            y[j] += h;
            const double fpp = u.value(y);
            y[j] -= 2.0 * h;
            const double fpm = u.value(y);
            y[i] -= 2.0 * h;
            const double fmm = u.value(y);
            y[j] += 2.0 * h;
            const double fmp = u.value(y);
            d2(i, j) = d2(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        }
    }
    const double g2 = du.squaredNorm();
    const double g = std::sqrt(g2);
    require(g >= kGradientFloor, ErrorKind::DegenerateGradient, "plaplace_residual: gradient below 1e-6");

    ResidualReport out;
    out.point = x;
    out.h = h;
    out.gradient_norm = g;
    out.residual = std::pow(g, p - 2.0) * (d2.trace() + (p - 2.0) * du.dot(d2 * du) / g2);
    out.normalized = out.residual / std::max(std::pow(g, p - 1.0), kNormalizationFloor);
    out.pass = std::abs(out.normalized) <= threshold;
    return out;
}

ConvergenceResult convergence_order(const fields::ScalarField& u, double p, const Point& x,
                                    const std::vector<double>& steps)
{
    require(steps.size() >= 3, ErrorKind::Validation, "convergence_order: need at least 3 steps");
    ConvergenceResult out;
    out.steps = steps;
    std::vector<double> lx, ly;
    for (const double h : steps) {
        const double r = plaplace_residual(u, p, x, h).residual;
        out.residuals.push_back(r);
        if (std::abs(r) <= kRoundingFloor) {
            out.skipped = true;
        }
        lx.push_back(std::log(h));
        ly.push_back(std::log(std::abs(r)));
    }
    out.slope = out.skipped ? std::numeric_limits<double>::quiet_NaN() : ls_slope(lx, ly);
    return out;
}

double spherical_residual_3d(const spectral::SpectralPair& pair, double beta, double phi, double theta, double h,
                             double scale)
{
    require(h > 0.0, ErrorKind::Validation, "spherical_residual_3d: step must be positive");
    require(std::sin(phi) >= 0.05, ErrorKind::Exclusion, "spherical_residual_3d: too close to a pole");
    const double p = pair.p;
    const double lambda3 = spectral::lambda_eig(3, beta, p);
    auto v = [&](double t, double f) { return scale * std::pow(std::sin(f), beta) * pair.profile.eval(t).omega; };
    auto weight = [&](double vv, double vt, double vf, double f) {
        const double s = std::sin(f);
        return std::pow(beta * beta * vv * vv + vf * vf + vt * vt / (s * s), 0.5 * (p - 2.0));
    };
    // Flux in phi at (theta, phi + sign h/2), all derivatives on the half-step stencil.
    auto flux_phi = [&](double sign) {
        const double f = phi + 0.5 * sign * h;
        const double vf = sign * (v(theta, phi + sign * h) - v(theta, phi)) / h;
        const double vt = (v(theta + 0.5 * h, f) - v(theta - 0.5 * h, f)) / h;
        return std::sin(f) * weight(v(theta, f), vt, vf, f) * vf;
    };
    auto flux_theta = [&](double sign) {
        const double t = theta + 0.5 * sign * h;
        const double vt = sign * (v(theta + sign * h, phi) - v(theta, phi)) / h;
        const double vf = (v(t, phi + 0.5 * h) - v(t, phi - 0.5 * h)) / h;
        return weight(v(t, phi), vt, vf, phi) * vt;
    };
    const double s = std::sin(phi);
    const double lhs = -(flux_phi(1.0) - flux_phi(-1.0)) / (h * s) - (flux_theta(1.0) - flux_theta(-1.0)) / (h * s * s);
    const double v0 = v(theta, phi);
    const double vt0 = (v(theta + h, phi) - v(theta - h, phi)) / (2.0 * h);
    const double vf0 = (v(theta, phi + h) - v(theta, phi - h)) / (2.0 * h);
    const double rhs = lambda3 * weight(v0, vt0, vf0, phi) * v0;
    return lhs - rhs;
}

std::vector<LimitEstimate> boundary_limit(const fields::ScalarField& u, const Point& a, const Point& normal,
                                          const std::vector<Point>& directions, const std::vector<double>& ts)
{
    require(ts.size() >= 2, ErrorKind::Validation, "boundary_limit: need at least two t values");
    const double t1 = ts[ts.size() - 2];
    const double t2 = ts.back();
    require(t1 > 0.0 && t2 > 0.0 && t1 != t2, ErrorKind::Validation, "boundary_limit: t values must be distinct");
    std::vector<LimitEstimate> out;
    for (const auto& d : directions) {
        const Point sigma = d.normalized();
        const double dot = sigma.dot(normal);
        require(dot < 0.0, ErrorKind::Validation, "boundary_limit: directions must point into the domain");
        const double f1 = t1 * u.value(a + t1 * sigma);
        const double f2 = t2 * u.value(a + t2 * sigma);
        LimitEstimate est;
        est.direction = sigma;
        est.estimate = (t1 * f2 - t2 * f1) / (t1 - t2);
        est.expected = -dot;
        est.error = std::abs(est.estimate - est.expected);
        out.push_back(est);
    }
    return out;
}

std::vector<Point> direction_fan(const Point& normal, int count)
{
    require(normal.size() == 2, ErrorKind::Validation, "direction_fan: planar normals only");
    require(count >= 1, ErrorKind::Validation, "direction_fan: count must be positive");
    const Point n = normal.normalized();
    Point t(2);
    t << -n[1], n[0];
    std::vector<Point> out;
    for (int i = 0; i < count; ++i) {
        const double ang = -0.5 * std::numbers::pi + (i + 0.5) / count * std::numbers::pi;
        out.emplace_back(std::cos(ang) * (-n) + std::sin(ang) * t);
    }
    return out;
}

BlowupResult blowup_convergence(const fields::ScalarField& u, const Point& a, const Point& normal,
                                const std::vector<Point>& ys, const std::vector<double>& radii)
{
    require(radii.size() >= 2, ErrorKind::Validation, "blowup_convergence: need at least two radii");
    BlowupResult out;
    out.radii = radii;
    std::vector<double> lx, ly;
    for (const double r : radii) {
        double worst = 0.0;
        for (const auto& y : ys) {
            const double profile = -y.dot(normal) / y.squaredNorm();
            worst = std::max(worst, std::abs(r * u.value(a + r * y) - profile));
        }
        out.errors.push_back(worst);
        lx.push_back(std::log(r));
        ly.push_back(std::log(worst));
    }
    out.slope = ls_slope(lx, ly);
    return out;
}

nlohmann::json GrowthReport::to_json() const
{
    return {{"lower_checked", lower_checked},     {"upper_checked", upper_checked},
            {"lower_violations", lower_violations}, {"upper_violations", upper_violations},
            {"worst_lower", worst_lower},         {"worst_upper", worst_upper},
            {"fitted_c", fitted_c},               {"pass", pass}};
}

GrowthReport growth_bounds_check(const std::vector<Point>& points, const std::vector<double>& values,
                                 const Point& a, const geometry::DomainGeometry& g, double tol)
{
    require(points.size() == values.size(), ErrorKind::Validation, "growth_bounds_check: size mismatch");
    const Point na = geometry::project(g, a).normal;
    const Point wi = a - na;
    const Point we = a + na;
    GrowthReport rep;
    rep.worst_lower = -std::numeric_limits<double>::infinity();
    rep.worst_upper = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point& x = points[i];
        const double u = values[i];
        const double da2 = (x - a).squaredNorm();
        if (da2 == 0.0) {
            continue;
        }
        const double di2 = (x - wi).squaredNorm();
        if (di2 < 1.0) {
            const double lower = (1.0 - di2) / (2.0 * da2);
            const double gap = (lower - u) / std::max(1.0, std::abs(lower));
            rep.worst_lower = std::max(rep.worst_lower, gap);
            ++rep.lower_checked;
            if (gap > tol) {
                ++rep.lower_violations;
            }
        }
        const double upper = ((x - we).squaredNorm() - 1.0) / (2.0 * da2);
        const double gap = (u - upper) / std::max(1.0, std::abs(upper));
        rep.worst_upper = std::max(rep.worst_upper, gap);
        ++rep.upper_checked;
        if (gap > tol) {
            ++rep.upper_violations;
        }
        const double rho = -geometry::signed_distance(g, x);
        if (rho > 0.0) {
            rep.fitted_c = std::max(rep.fitted_c, u * da2 / rho);
        }
    }
    rep.pass = rep.lower_violations == 0 && rep.upper_violations == 0;
    return rep;
}

GrowthReport growth_bounds_check(const fields::ScalarField& u, const Point& a, const geometry::DomainGeometry& g,
                                 const std::vector<Point>& samples, double tol)
{
    std::vector<double> values;
    values.reserve(samples.size());
    for (const auto& x : samples) {
        const double v = u.value(x);
        require(v > 0.0, ErrorKind::Validation, "growth_bounds_check: u must be positive on samples");
        values.push_back(v);
    }
    return growth_bounds_check(samples, values, a, g, tol);
}

CoefficientField::CoefficientField(Point x, Matrix jacobian, double p, bool transformed)
    : x_(std::move(x)), jac_(std::move(jacobian)), p_(p), det_(std::abs(jac_.determinant())), transformed_(transformed)
{
}

Point CoefficientField::apply(const Point& eta) const
{
    const auto n = eta.size();
    if (eta.isZero(0.0)) {
        return Point::Zero(n);
    }
    if (!transformed_) {
        return std::pow(eta.norm(), p_ - 2.0) * eta;
    }
    const Point w = jac_ * eta;
    return det_ * std::pow(w.norm(), p_ - 2.0) * (jac_.transpose() * w);
}

Matrix CoefficientField::derivative(const Point& eta, double step) const
{
    const auto n = eta.size();
    Matrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Point ep = eta, em = eta;
        ep[i] += step;
        em[i] -= step;
        d.col(i) = (apply(ep) - apply(em)) / (2.0 * step);
    }
    return d;
}

CoefficientField transformed_coefficients(const geometry::DomainGeometry& g, double p, const Point& x)
{
    require(p > 1.0 && std::isfinite(p), ErrorKind::Validation, "transformed_coefficients: p must exceed 1");
    const auto data = geometry::reflect(g, x);
    if (data.signed_distance > 0.0) {
        return CoefficientField(x, data.jacobian, p, true);
    }
    const auto n = x.size();
    return CoefficientField(x, Matrix::Identity(n, n), p, false);
}

EllipticityBounds ellipticity_sample(const geometry::DomainGeometry& g, double p, const std::vector<Point>& xs,
                                     const std::vector<Point>& etas, const std::vector<Point>& xis)
{
    EllipticityBounds out;
    out.lower = std::numeric_limits<double>::infinity();
    out.upper = 0.0;
    for (const auto& x : xs) {
        const CoefficientField cf = transformed_coefficients(g, p, x);
        for (const auto& eta : etas) {
            const double en = eta.norm();
            require(en > 0.0, ErrorKind::Validation, "ellipticity_sample: eta must be nonzero");
            const Matrix d = cf.derivative(eta, 1e-6 * std::max(1.0, en));
            const double scale = std::pow(en, p - 2.0);
            const Matrix sym = 0.5 * (d + d.transpose());
            Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
            out.lower = std::min(out.lower, eig.eigenvalues().minCoeff() / scale);
            for (const auto& xi : xis) {
                out.lower = std::min(out.lower, xi.dot(d * xi) / (scale * xi.squaredNorm()));
            }
            out.upper = std::max(out.upper, d.cwiseAbs().sum() / scale);
        }
    }
    out.positive = out.lower > 0.0;
    return out;
}

nlohmann::json ReflectionCheck::to_json() const
{
    return {{"p", p},
            {"samples", samples},
            {"max_zero_value", max_zero_value},
            {"max_boundary_deviation", max_boundary_deviation},
            {"lower", ellipticity.lower},
            {"upper", ellipticity.upper},
            {"required_lower", required_lower},
            {"pass", pass}};
}

ReflectionCheck reflection_check(const geometry::DomainGeometry& g, double p, const std::vector<Point>& xs,
                                 const std::vector<Point>& etas, const std::vector<Point>& xis, double boundary_tol)
{
    require(!xs.empty() && !etas.empty(), ErrorKind::Validation, "reflection_check: need samples");
    ReflectionCheck out;
    out.p = p;
    out.samples = static_cast<int>(xs.size());
    out.required_lower = 0.5 * std::min(1.0, p - 1.0);
    for (const auto& x : xs) {
        const CoefficientField cf = transformed_coefficients(g, p, x);
        out.max_zero_value = std::max(out.max_zero_value, cf.apply(Point::Zero(x.size())).cwiseAbs().maxCoeff());
        // Transformed formula evaluated on the boundary itself.
        const Point xi = geometry::project(g, x).point;
        const CoefficientField on_boundary(xi, geometry::reflect(g, xi).jacobian, p, true);
        for (const auto& eta : etas) {
            const Point expected = std::pow(eta.norm(), p - 2.0) * eta;
            const double dev = (on_boundary.apply(eta) - expected).norm() / expected.norm();
            out.max_boundary_deviation = std::max(out.max_boundary_deviation, dev);
        }
    }
    out.ellipticity = ellipticity_sample(g, p, xs, etas, xis);
    out.pass = out.max_zero_value == 0.0 && out.max_boundary_deviation <= boundary_tol &&
               out.ellipticity.lower >= out.required_lower;
    return out;
}

RatioStats ratio_diagnostic(const fields::ScalarField& u, const fields::ScalarField& v,
                            const std::vector<Point>& samples)
{
    require(!samples.empty(), ErrorKind::Validation, "ratio_diagnostic: no samples");
    std::vector<double> ratios;
    for (const auto& x : samples) {
        const double vv = v.value(x);
        require(vv > 0.0, ErrorKind::Validation, "ratio_diagnostic: v must be positive at samples");
        ratios.push_back(u.value(x) / vv);
    }
    RatioStats s;
    s.min = s.max = ratios.front();
    double sum = 0.0;
    for (const double r : ratios) {
        sum += r;
        s.min = std::min(s.min, r);
        s.max = std::max(s.max, r);
    }
    s.mean = sum / static_cast<double>(ratios.size());
    for (const double r : ratios) {
        s.max_deviation = std::max(s.max_deviation, std::abs(r - s.mean));
    }
    return s;
}

}  // namespace plap::verify

#pragma once

#include "plap/core.hpp"
#include "plap/fields.hpp"
#include "plap/geometry.hpp"
#include "plap/spectral.hpp"

#include <json.hpp>

#include <vector>

namespace plap::verify {

inline constexpr double kGradientFloor = 1e-6;
inline constexpr double kNormalizationFloor = 1e-8;
inline constexpr double kRoundingFloor = 1e-11;
inline constexpr double kResidualThreshold = 1e-4;

struct ResidualReport {
    Point point;
    double h = 0.0;
    double residual = 0.0;
    double gradient_norm = 0.0;
    double normalized = 0.0;
    bool pass = false;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Strong form div(|Du|^{p-2} Du) = |Du|^{p-2}(Lap u + (p-2) <D2u Du, Du>/|Du|^2)
/// with Du, D2u from second-order central differences of values only.
/// Throws Exclusion within 10h of a singular point and DegenerateGradient
/// when |Du| < 1e-6.
ResidualReport plaplace_residual(const fields::ScalarField& u, double p, const Point& x, double h,
                                 double threshold = kResidualThreshold);

struct ConvergenceResult {
    std::vector<double> steps;
    std::vector<double> residuals;
    double slope = 0.0;
    bool skipped = false;  // some |residual| at the rounding floor
};

/// Least-squares slope of log|residual| against log h.
ConvergenceResult convergence_order(const fields::ScalarField& u, double p, const Point& x,
                                    const std::vector<double>& steps);

/// Difference of the two sides of the 3D spherical equation for
/// v = scale * sin(phi)^beta * omega(theta), by nested central differences.
/// Throws Exclusion when sin(phi) < 0.05.
double spherical_residual_3d(const spectral::SpectralPair& pair, double beta, double phi, double theta, double h,
                             double scale = 1.0);

struct LimitEstimate {
    Point direction;
    double estimate = 0.0;
    double expected = 0.0;  // -<sigma, n_a>
    double error = 0.0;
};

/// |x-a| u(x) along a + t sigma, extrapolated to t -> 0 from the last two t
/// values by linear elimination.
std::vector<LimitEstimate> boundary_limit(const fields::ScalarField& u, const Point& a, const Point& normal,
                                          const std::vector<Point>& directions, const std::vector<double>& ts);

/// `count` unit directions spread over the open half-plane {<sigma, n> < 0}.
std::vector<Point> direction_fan(const Point& normal, int count);

struct BlowupResult {
    std::vector<double> radii;
    std::vector<double> errors;  // sup over sample directions
    double slope = 0.0;          // of log error against log r
};

/// Compares r u(a + r y) with the half-space profile <y, -n>/|y|^2 at the
/// given unit vectors y. `u` should already be extended across the boundary
/// for samples with <y, n> > 0.
BlowupResult blowup_convergence(const fields::ScalarField& u, const Point& a, const Point& normal,
                                const std::vector<Point>& ys, const std::vector<double>& radii);

struct GrowthReport {
    int lower_checked = 0;
    int upper_checked = 0;
    int lower_violations = 0;
    int upper_violations = 0;
    double worst_lower = 0.0;  // max of (lower bound - u), relative
    double worst_upper = 0.0;  // max of (u - upper bound), relative
    double fitted_c = 0.0;     // smallest C with u <= C rho / |x-a|^2
    bool pass = false;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Checks (1-|x-w_i|^2)/(2|x-a|^2) <= u on samples inside the interior
/// tangent ball and u <= (|x-w_e|^2-1)/(2|x-a|^2) on all domain samples, with
/// w_i = a - n_a and w_e = a + n_a (unit tangent balls). Violations are
/// counted with relative tolerance `tol`.
GrowthReport growth_bounds_check(const fields::ScalarField& u, const Point& a, const geometry::DomainGeometry& g,
                                 const std::vector<Point>& samples, double tol = 1e-12);

/// Same check on plain arrays of (point, value) pairs, used for nodal data.
GrowthReport growth_bounds_check(const std::vector<Point>& points, const std::vector<double>& values,
                                 const Point& a, const geometry::DomainGeometry& g, double tol);

/// eta -> |det Dpsi| |Dpsi eta|^{p-2} Dpsi^T Dpsi eta at a tube point.
/// Inside the domain the map is the untransformed |eta|^{p-2} eta.
class CoefficientField {
public:
    CoefficientField(Point x, Matrix jacobian, double p, bool transformed);

    [[nodiscard]] Point apply(const Point& eta) const;
    /// Central-difference derivative d A_j / d eta_i (row j, column i).
    [[nodiscard]] Matrix derivative(const Point& eta, double step = 1e-6) const;

    [[nodiscard]] const Point& point() const noexcept { return x_; }
    [[nodiscard]] const Matrix& jacobian() const noexcept { return jac_; }
    [[nodiscard]] double determinant() const noexcept { return det_; }
    [[nodiscard]] bool transformed() const noexcept { return transformed_; }

private:
    Point x_;
    Matrix jac_;
    double p_;
    double det_;
    bool transformed_;
};

CoefficientField transformed_coefficients(const geometry::DomainGeometry& g, double p, const Point& x);

struct EllipticityBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool positive = false;
};

/// Lower: min over samples of xi^T (dA/deta) xi / (|eta|^{p-2}|xi|^2), also
/// taking the smallest eigenvalue of the symmetrized derivative.
/// Upper: max of sum |dA_j/deta_i| / |eta|^{p-2}.
EllipticityBounds ellipticity_sample(const geometry::DomainGeometry& g, double p, const std::vector<Point>& xs,
                                     const std::vector<Point>& etas, const std::vector<Point>& xis);

struct ReflectionCheck {
    double p = 2.0;
    int samples = 0;
    double max_zero_value = 0.0;          // max |A(x, 0)|
    double max_boundary_deviation = 0.0;  // relative, transformed A at boundary points vs |eta|^{p-2} eta
    EllipticityBounds ellipticity;
    double required_lower = 0.0;          // 0.5 min(1, p-1)
    bool pass = false;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Reflection-lemma checks at tube points: A(x, 0) = 0, the transformed
/// coefficients reduce to |eta|^{p-2} eta at the boundary projections of the
/// samples, and the sampled lower ellipticity constant is at least
/// 0.5 min(1, p-1). Boundary deviation must not exceed `boundary_tol`.
ReflectionCheck reflection_check(const geometry::DomainGeometry& g, double p, const std::vector<Point>& xs,
                                 const std::vector<Point>& etas, const std::vector<Point>& xis,
                                 double boundary_tol = 1e-10);

struct RatioStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double max_deviation = 0.0;  // max |u/v - mean|
};

RatioStats ratio_diagnostic(const fields::ScalarField& u, const fields::ScalarField& v,
                            const std::vector<Point>& samples);

}  // namespace plap::verify

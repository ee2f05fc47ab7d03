#pragma once

#include "plap/core.hpp"
#include "plap/geometry.hpp"
#include "plap/spectral.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace plap::fields {

struct FieldValue {
    double value = 0.0;
    Point gradient;
};

/// A point-evaluatable scalar field with gradient and singular-point metadata.
class ScalarField {
public:
    using Evaluator = std::function<FieldValue(const Point&)>;
    using DistanceFn = std::function<double(const Point&)>;

    ScalarField(int n, Evaluator eval, std::string description, std::vector<Point> singular = {},
                double p = std::numeric_limits<double>::quiet_NaN());

    /// Value and analytic gradient. Throws SingularPoint at a recorded singularity.
    [[nodiscard]] FieldValue evaluate(const Point& x) const;
    [[nodiscard]] double value(const Point& x) const { return evaluate(x).value; }
    [[nodiscard]] Point gradient(const Point& x) const { return evaluate(x).gradient; }

    /// Central-difference gradient of the value evaluator.
    [[nodiscard]] Point gradient_fd(const Point& x, double step = 1e-6) const;

    [[nodiscard]] int dimension() const noexcept { return n_; }
    /// Exponent the field is p-harmonic for (NaN when not declared).
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }
    [[nodiscard]] const std::vector<Point>& singular_points() const noexcept { return singular_; }

    /// Distance from x to the nearest recorded singular point or non-smooth
    /// set (infinity if none).
    [[nodiscard]] double singular_distance(const Point& x) const;

    /// Copy that also treats the set measured by `dist` (e.g. the axis where
    /// rho^beta is not smooth) as singular for exclusion and sampling.
    [[nodiscard]] ScalarField with_singular_set(DistanceFn dist) const;
    [[nodiscard]] const DistanceFn& singular_set() const noexcept { return set_distance_; }

private:
    int n_;
    Evaluator eval_;
    std::string description_;
    std::vector<Point> singular_;
    double p_;
    DistanceFn set_distance_;
};

ScalarField coordinate_field(int axis, int n, double p = std::numeric_limits<double>::quiet_NaN());

/// x_i / |x|^2, singular at the origin.
ScalarField chi_field(int axis, int n);

/// (1 - |x-c|^2) / (2 |x-a|^2) on the unit ball centred at c, |a - c| = 1.
ScalarField ball_interior_field(int n, const Point& a, const Point& center);
ScalarField ball_interior_field(int n, const Point& a);

/// (|x-c|^2 - 1) / (2 |x-a|^2) outside the unit ball centred at c.
ScalarField ball_exterior_field(int n, const Point& a, const Point& center);
ScalarField ball_exterior_field(int n, const Point& a);

/// Planar Poisson kernel (1 - |x-c|^2) / |x-a|^2 of the unit disk centred at c.
ScalarField poisson_kernel(const Point& a, const Point& center);

/// |x|^2; not p-harmonic for any p (negative control).
ScalarField square_norm_field(int n);

/// u o I with I(x) = c + s (x-c)/|x-c|^2.
ScalarField invert_field(const ScalarField& u, const Point& center, double power);

/// r^beta omega(theta) with standard polar angle theta = atan2(x2, x1).
ScalarField separable_2d(const spectral::SpectralPair& pair);

/// (r sin t_{n-1} ... sin t_2)^beta omega(t_1) in generalized Euler angles, n >= 3.
/// With rho = |(x1, x2)| and t_1 = atan2(x1, x2) this is rho^beta omega(t_1).
ScalarField separable_nd(const spectral::SpectralPair& pair, int n);

/// r^{-beta} (sin t_{n-1} ... sin t_2)^beta omega(t_1); requires p = n.
/// For n = 2 the polar angle of separable_2d is used.
ScalarField separable_singular(const spectral::SpectralPair& pair, int n);

/// Odd extension through the boundary: u inside, -u(psi(x)) outside.
ScalarField extend_field(const ScalarField& u, const geometry::DomainGeometry& g);

/// c * u.
ScalarField scale_field(const ScalarField& u, double factor);

/// y -> r u(origin + r y), the blow-up of u at origin.
ScalarField blowup_field(const ScalarField& u, const Point& origin, double r);

/// Builds a field from a JSON descriptor, e.g.
///   {"type":"ball_interior","n":2,"a":[1,0]}
///   {"type":"invert","field":{...},"center":[0,0],"power":1}
ScalarField make_field(const nlohmann::json& descriptor);

/// Profile resolution used when descriptors build separable fields.
inline constexpr int kDefaultProfileNodes = 2048;

/// Tolerances for tabulating profiles consumed by fields.
ode::Tolerances profile_tolerances();

/// CSV `x1,...,xn,value,grad1,...,gradn`, 17 significant digits.
std::string sample_csv(const ScalarField& u, const std::vector<Point>& points);

}  // namespace plap::fields

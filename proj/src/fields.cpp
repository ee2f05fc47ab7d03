#include "plap/fields.hpp"

#include "plap/json_util.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace plap::fields {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_axis(int axis, int n)
{
    require(n >= 2, ErrorKind::Validation, "field: dimension must be >= 2");
    require(axis >= 1 && axis <= n, ErrorKind::Validation, "field: axis must lie in 1..n");
}

void check_boundary_point(const Point& a, const Point& center)
{
    require(a.size() == center.size() && a.size() >= 2, ErrorKind::Validation, "field: dimension mismatch");
    require(std::abs((a - center).norm() - 1.0) <= 1e-12, ErrorKind::Validation,
            "field: a must lie on the unit sphere around the centre");
}

void check_dimension(const Point& x, int n)
{
    require(x.size() == n, ErrorKind::Validation, "field: point dimension mismatch");
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string describe_point(const Point& x)
{
    std::string s = "(";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        s += (i ? "," : "") + fmt(x[i]);
    }
    return s + ")";
}

/// Value and gradient of (q(x)) / (2 |x-a|^2) with q = s (|x-c|^2 - 1), s = -1 or +1.
FieldValue tangent_ball_value(const Point& x, const Point& a, const Point& c, double sign, double scale)
{
    const Point dc = x - c;
    const Point da = x - a;
    const double da2 = da.squaredNorm();
    require(da2 > 0.0, ErrorKind::SingularPoint, "field: evaluation at the singular point");
    const double q = sign * (dc.squaredNorm() - 1.0);
    FieldValue out;
    out.value = scale * q / (2.0 * da2);
    // d/dx [q / (2 da2)] = (2 s dc) / (2 da2) - q da / da2^2
    out.gradient = scale * ((sign / da2) * dc - (q / (da2 * da2)) * da);
    return out;
}

}  // namespace

ScalarField::ScalarField(int n, Evaluator eval, std::string description, std::vector<Point> singular, double p)
    : n_(n), eval_(std::move(eval)), description_(std::move(description)), singular_(std::move(singular)), p_(p)
{
    require(n_ >= 2, ErrorKind::Validation, "field: dimension must be >= 2");
}

FieldValue ScalarField::evaluate(const Point& x) const
{
    check_dimension(x, n_);
    for (const auto& s : singular_) {
        require((x - s).norm() > 1e-14 * std::max(1.0, s.norm()), ErrorKind::SingularPoint,
                description_ + ": evaluation at singular point " + describe_point(s));
    }
    return eval_(x);
}

Point ScalarField::gradient_fd(const Point& x, double step) const
{
    Point g(n_);
    for (int i = 0; i < n_; ++i) {
        Point xp = x;
        Point xm = x;
        xp[i] += step;
        xm[i] -= step;
        g[i] = (value(xp) - value(xm)) / (2.0 * step);
    }
    return g;
}

double ScalarField::singular_distance(const Point& x) const
{
    double best = set_distance_ ? set_distance_(x) : std::numeric_limits<double>::infinity();
    for (const auto& s : singular_) {
        best = std::min(best, (x - s).norm());
    }
    return best;
}

ScalarField ScalarField::with_singular_set(DistanceFn dist) const
{
    ScalarField out = *this;
    out.set_distance_ = std::move(dist);
    return out;
}

ScalarField coordinate_field(int axis, int n, double p)
{
    check_axis(axis, n);
    auto eval = [axis, n](const Point& x) {
        FieldValue out{x[axis - 1], Point::Zero(n)};
        out.gradient[axis - 1] = 1.0;
        return out;
    };
    return ScalarField(n, eval, "coordinate x" + std::to_string(axis), {}, p);
}

ScalarField chi_field(int axis, int n)
{
    check_axis(axis, n);
    auto eval = [axis](const Point& x) {
        const double r2 = x.squaredNorm();
        require(r2 > 0.0, ErrorKind::SingularPoint, "chi: evaluation at the origin");
        const double xi = x[axis - 1];
        FieldValue out{xi / r2, (-2.0 * xi / (r2 * r2)) * x};
        out.gradient[axis - 1] += 1.0 / r2;
        return out;
    };
    return ScalarField(n, eval, "chi" + std::to_string(axis), {Point::Zero(n)}, static_cast<double>(n));
}

ScalarField ball_interior_field(int n, const Point& a, const Point& center)
{
    require(a.size() == n, ErrorKind::Validation, "ball_interior_field: dimension mismatch");
    check_boundary_point(a, center);
    auto eval = [a, center](const Point& x) { return tangent_ball_value(x, a, center, -1.0, 1.0); };
    return ScalarField(n, eval, "ball interior U^i", {a}, static_cast<double>(n));
}

ScalarField ball_interior_field(int n, const Point& a)
{
    return ball_interior_field(n, a, Point::Zero(n));
}

ScalarField ball_exterior_field(int n, const Point& a, const Point& center)
{
    require(a.size() == n, ErrorKind::Validation, "ball_exterior_field: dimension mismatch");
    check_boundary_point(a, center);
    auto eval = [a, center](const Point& x) { return tangent_ball_value(x, a, center, 1.0, 1.0); };
    return ScalarField(n, eval, "ball exterior U^e", {a}, static_cast<double>(n));
}

ScalarField ball_exterior_field(int n, const Point& a)
{
    return ball_exterior_field(n, a, Point::Zero(n));
}

ScalarField poisson_kernel(const Point& a, const Point& center)
{
    require(a.size() == 2, ErrorKind::Validation, "poisson_kernel: planar only");
    check_boundary_point(a, center);
    auto eval = [a, center](const Point& x) { return tangent_ball_value(x, a, center, -1.0, 2.0); };
    return ScalarField(2, eval, "Poisson kernel", {a}, 2.0);
}

ScalarField square_norm_field(int n)
{
    require(n >= 2, ErrorKind::Validation, "square_norm: dimension must be >= 2");
    auto eval = [](const Point& x) { return FieldValue{x.squaredNorm(), 2.0 * x}; };
    return ScalarField(n, eval, "|x|^2", {});
}

ScalarField invert_field(const ScalarField& u, const Point& center, double power)
{
    require(power > 0.0, ErrorKind::Validation, "invert_field: power must be positive");
    require(center.size() == u.dimension(), ErrorKind::Validation, "invert_field: dimension mismatch");
    const auto n = u.dimension();
    auto inv = [center, power](const Point& x) -> Point {
        const Point d = x - center;
        return center + (power / d.squaredNorm()) * d;
    };
    std::vector<Point> singular{center};
    for (const auto& s : u.singular_points()) {
        if ((s - center).norm() > 0.0) {
            singular.push_back(inv(s));
        }
    }
    auto eval = [u, center, power, inv](const Point& x) {
        const Point d = x - center;
        const double d2 = d.squaredNorm();
        require(d2 > 0.0, ErrorKind::SingularPoint, "invert_field: evaluation at the inversion centre");
        const FieldValue inner = u.evaluate(inv(x));
        // DI = (s/|d|^2)(I - 2 d d^T/|d|^2) is symmetric.
        const Point& g = inner.gradient;
        FieldValue out;
        out.value = inner.value;
        out.gradient = (power / d2) * (g - (2.0 * d.dot(g) / d2) * d);
        return out;
    };
    ScalarField out(n, eval, "inversion of " + u.description(), std::move(singular), u.p());
    if (const auto& inner = u.singular_set()) {
        // The inversion scales lengths locally by s/|x-c|^2.
        out = out.with_singular_set([inner, center, power, inv](const Point& x) {
            const double d2 = (x - center).squaredNorm();
            return d2 == 0.0 ? 0.0 : inner(inv(x)) * d2 / power;
        });
    }
    return out;
}

namespace {

using PairPtr = std::shared_ptr<const spectral::SpectralPair>;

/// rho^beta omega(theta) and its gradient in the (x1, x2) plane, where
/// (c, s) are the components used for the angle: theta = atan2(s, c).
struct PlaneTerm {
    double value;
    double d_first;   // derivative w.r.t. x1
    double d_second;  // derivative w.r.t. x2
};

PlaneTerm plane_term(const spectral::SpectralPair& pair, double x1, double x2, bool euler)
{
    const double beta = pair.beta;
    const double rho2 = x1 * x1 + x2 * x2;
    if (rho2 == 0.0) {
        if (beta > 1.0) {
            return {0.0, 0.0, 0.0};
        }
        // beta = 1 only for k = 1 where omega = sin: the field is linear.
        return euler ? PlaneTerm{0.0, 1.0, 0.0} : PlaneTerm{0.0, 0.0, 1.0};
    }
    const double rho = std::sqrt(rho2);
    const double theta = euler ? std::atan2(x1, x2) : std::atan2(x2, x1);
    const auto w = pair.profile.eval(theta);
    const double rb2 = std::pow(rho, beta - 2.0);
    const double value = rb2 * rho2 * w.omega;
    if (euler) {
        // d theta/dx1 = x2/rho^2, d theta/dx2 = -x1/rho^2
        return {value, rb2 * (beta * w.omega * x1 + w.omega_prime * x2),
                rb2 * (beta * w.omega * x2 - w.omega_prime * x1)};
    }
    // d theta/dx1 = -x2/rho^2, d theta/dx2 = x1/rho^2
    return {value, rb2 * (beta * w.omega * x1 - w.omega_prime * x2), rb2 * (beta * w.omega * x2 + w.omega_prime * x1)};
}

std::string pair_label(const spectral::SpectralPair& pair)
{
    return "p=" + fmt(pair.p) + ",k=" + std::to_string(pair.k);
}

}  // namespace

ScalarField separable_2d(const spectral::SpectralPair& pair)
{
    PairPtr pp = std::make_shared<const spectral::SpectralPair>(pair);
    auto eval = [pp](const Point& x) {
        const auto t = plane_term(*pp, x[0], x[1], false);
        FieldValue out{t.value, Point(2)};
        out.gradient << t.d_first, t.d_second;
        return out;
    };
    return ScalarField(2, eval, "separable 2d " + pair_label(pair), {}, pair.p)
        .with_singular_set([](const Point& x) { return x.norm(); });
}

ScalarField separable_nd(const spectral::SpectralPair& pair, int n)
{
    require(n >= 3, ErrorKind::Validation, "separable_nd: dimension must be >= 3");
    PairPtr pp = std::make_shared<const spectral::SpectralPair>(pair);
    auto eval = [pp, n](const Point& x) {
        const auto t = plane_term(*pp, x[0], x[1], true);
        FieldValue out{t.value, Point::Zero(n)};
        out.gradient[0] = t.d_first;
        out.gradient[1] = t.d_second;
        return out;
    };
    return ScalarField(n, eval, "separable " + std::to_string(n) + "d " + pair_label(pair), {}, pair.p)
        .with_singular_set([](const Point& x) { return std::hypot(x[0], x[1]); });
}

ScalarField separable_singular(const spectral::SpectralPair& pair, int n)
{
    require(n >= 2, ErrorKind::Validation, "separable_singular: dimension must be >= 2");
    require(std::abs(pair.p - static_cast<double>(n)) <= 1e-12, ErrorKind::Validation,
            "separable_singular: requires p = n");
    PairPtr pp = std::make_shared<const spectral::SpectralPair>(pair);
    auto eval = [pp, n](const Point& x) {
        const double r2 = x.squaredNorm();
        require(r2 > 0.0, ErrorKind::SingularPoint, "separable_singular: evaluation at the origin");
        const auto t = plane_term(*pp, x[0], x[1], n >= 3);
        // u = r^{-2 beta} v with v the regular separable field.
        const double beta = pp->beta;
        const double w = std::pow(r2, -beta);
        FieldValue out{w * t.value, Point::Zero(n)};
        out.gradient[0] = w * t.d_first;
        out.gradient[1] = w * t.d_second;
        out.gradient -= (2.0 * beta * w * t.value / r2) * x;
        return out;
    };
    return ScalarField(n, eval, "separable singular " + std::to_string(n) + "d " + pair_label(pair),
                       {Point::Zero(n)}, pair.p)
        .with_singular_set([](const Point& x) { return std::hypot(x[0], x[1]); });
}

ScalarField extend_field(const ScalarField& u, const geometry::DomainGeometry& g)
{
    require(g.dimension() == u.dimension(), ErrorKind::Validation, "extend_field: dimension mismatch");
    auto eval = [u, g](const Point& x) {
        const auto data = geometry::reflect(g, x);
        if (data.signed_distance <= 0.0) {
            return u.evaluate(x);
        }
        const FieldValue inner = u.evaluate(data.image);
        return FieldValue{-inner.value, -(data.jacobian.transpose() * inner.gradient)};
    };
    ScalarField out(u.dimension(), eval, "extension of " + u.description(), u.singular_points(), u.p());
    if (const auto& inner = u.singular_set()) {
        out = out.with_singular_set([inner, g](const Point& x) {
            return geometry::signed_distance(g, x) <= 0.0 ? inner(x) : inner(geometry::reflect_point(g, x));
        });
    }
    return out;
}

ScalarField scale_field(const ScalarField& u, double factor)
{
    require(std::isfinite(factor), ErrorKind::Validation, "scale_field: factor must be finite");
    auto eval = [u, factor](const Point& x) {
        FieldValue v = u.evaluate(x);
        return FieldValue{factor * v.value, factor * v.gradient};
    };
    ScalarField out(u.dimension(), eval, fmt(factor) + " * " + u.description(), u.singular_points(), u.p());
    return u.singular_set() ? out.with_singular_set(u.singular_set()) : out;
}

ScalarField blowup_field(const ScalarField& u, const Point& origin, double r)
{
    require(r > 0.0, ErrorKind::Validation, "blowup_field: r must be positive");
    require(origin.size() == u.dimension(), ErrorKind::Validation, "blowup_field: dimension mismatch");
    std::vector<Point> singular;
    for (const auto& s : u.singular_points()) {
        singular.push_back((s - origin) / r);
    }
    auto eval = [u, origin, r](const Point& y) {
        FieldValue v = u.evaluate(origin + r * y);
        return FieldValue{r * v.value, r * r * v.gradient};
    };
    ScalarField out(u.dimension(), eval, "blow-up of " + u.description(), std::move(singular), u.p());
    if (const auto& inner = u.singular_set()) {
        out = out.with_singular_set([inner, origin, r](const Point& y) { return inner(origin + r * y) / r; });
    }
    return out;
}

ode::Tolerances profile_tolerances()
{
    ode::Tolerances tol;
    tol.rtol = 1e-13;
    tol.atol = 1e-13;
    tol.max_step = 0.02;
    return tol;
}

ScalarField make_field(const nlohmann::json& d)
{
    using namespace json_util;
    require(d.is_object() && d.contains("type") && d.at("type").is_string(), ErrorKind::Validation,
            "field descriptor: missing 'type'");
    const auto type = d.at("type").get<std::string>();
    auto pair_of = [&](double p) {
        return spectral::tabulate(p, get_int(d, "k"), get_int_or(d, "m", kDefaultProfileNodes), profile_tolerances());
    };
    auto center_or_origin = [&](const Point& a) {
        return d.contains("center") ? to_point(d.at("center")) : Point(Point::Zero(a.size()));
    };
    if (type == "coordinate") {
        check_keys(d, {"type", "axis", "n", "p"}, "coordinate");
        return coordinate_field(get_int(d, "axis"), get_int(d, "n"), get_number_or(d, "p", kNaN));
    }
    if (type == "chi") {
        check_keys(d, {"type", "axis", "n"}, "chi");
        return chi_field(get_int(d, "axis"), get_int(d, "n"));
    }
    if (type == "ball_interior" || type == "ball_exterior") {
        check_keys(d, {"type", "a", "center"}, type);
        const Point a = to_point(d.at("a"));
        const auto n = static_cast<int>(a.size());
        return type == "ball_interior" ? ball_interior_field(n, a, center_or_origin(a))
                                       : ball_exterior_field(n, a, center_or_origin(a));
    }
    if (type == "poisson_kernel") {
        check_keys(d, {"type", "a", "center"}, "poisson_kernel");
        const Point a = to_point(d.at("a"));
        return poisson_kernel(a, center_or_origin(a));
    }
    if (type == "square_norm") {
        check_keys(d, {"type", "n"}, "square_norm");
        return square_norm_field(get_int(d, "n"));
    }
    if (type == "separable_2d") {
        check_keys(d, {"type", "p", "k", "m"}, "separable_2d");
        return separable_2d(pair_of(get_number(d, "p")));
    }
    if (type == "separable_nd") {
        check_keys(d, {"type", "p", "k", "n", "m"}, "separable_nd");
        return separable_nd(pair_of(get_number(d, "p")), get_int(d, "n"));
    }
    if (type == "separable_singular") {
        check_keys(d, {"type", "k", "n", "m"}, "separable_singular");
        const int n = get_int(d, "n");
        require(n >= 2, ErrorKind::Validation, "separable_singular: dimension must be >= 2");
        return separable_singular(pair_of(static_cast<double>(n)), n);
    }
    if (type == "invert") {
        check_keys(d, {"type", "field", "center", "power"}, "invert");
        return invert_field(make_field(d.at("field")), to_point(d.at("center")), get_number_or(d, "power", 1.0));
    }
    if (type == "extend") {
        check_keys(d, {"type", "field", "geometry"}, "extend");
        return extend_field(make_field(d.at("field")), geometry::DomainGeometry::from_json(d.at("geometry")));
    }
    if (type == "scaled") {
        check_keys(d, {"type", "field", "factor"}, "scaled");
        return scale_field(make_field(d.at("field")), get_number(d, "factor"));
    }
    if (type == "blowup") {
        check_keys(d, {"type", "field", "origin", "r"}, "blowup");
        return blowup_field(make_field(d.at("field")), to_point(d.at("origin")), get_number(d, "r"));
    }
    fail(ErrorKind::Validation, "field descriptor: unknown type '" + type + "'");
}

std::string sample_csv(const ScalarField& u, const std::vector<Point>& points)
{
    const int n = u.dimension();
    std::ostringstream out;
    for (int i = 1; i <= n; ++i) {
        out << 'x' << i << ',';
    }
    out << "value";
    for (int i = 1; i <= n; ++i) {
        out << ",grad" << i;
    }
    out << '\n';
    for (const auto& x : points) {
        const FieldValue v = u.evaluate(x);
        for (int i = 0; i < n; ++i) {
            out << fmt(x[i]) << ',';
        }
        out << fmt(v.value);
        for (int i = 0; i < n; ++i) {
            out << ',' << fmt(v.gradient[i]);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace plap::fields

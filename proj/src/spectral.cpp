#include "plap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>

namespace plap::spectral {

namespace {

void check_exponent(double p)
{
    require(std::isfinite(p) && p > 1.0, ErrorKind::Validation, "exponent p must satisfy p > 1");
}

void check_mode(int k)
{
    require(k >= 1, ErrorKind::Validation, "mode k must be a positive integer");
}

std::string format17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double beta_closed_form(double p, int k)
{
    check_exponent(p);
    check_mode(k);
    // With q = p - 1 the linear coefficient is [q(k^2+2k-1) + (k-1)^2]/q and the
    // discriminant factors as (k-1)^2 [q^2 (k-1)^2 + 2q(k^2+2k-1) + (k-1)^2] / q^2,
    // which is nonnegative and exactly zero at k = 1.
    const double q = p - 1.0;
    const double kk = static_cast<double>(k);
    const double m1 = kk - 1.0;
    const double s = kk * kk + 2.0 * kk - 1.0;
    const double bq = q * s + m1 * m1;
    const double inner = std::max(0.0, q * q * m1 * m1 + 2.0 * q * s + m1 * m1);
    return (bq + m1 * std::sqrt(inner)) / (2.0 * (2.0 * kk - 1.0) * q);
}

double exponent_quadratic(double p, int k, double x)
{
    const double kk = static_cast<double>(k);
    const double a = 2.0 * kk - 1.0;
    const double b = (p * kk * kk + (p - 2.0) * a) / (p - 1.0);
    return a * x * x - b * x + kk * kk;
}

double lambda_eig(int n, double beta, double p)
{
    require(n >= 2, ErrorKind::Validation, "lambda_eig: dimension must be >= 2");
    return beta * (static_cast<double>(n) - 1.0 + (beta - 1.0) * (p - 1.0));
}

double ode_rhs(double p, double beta, double omega, double omega_prime)
{
    const double lambda = beta * (1.0 + (beta - 1.0) * (p - 1.0));
    const double b2w2 = beta * beta * omega * omega;
    const double wp2 = omega_prime * omega_prime;
    const double denom = b2w2 + (p - 1.0) * wp2;
    require(denom >= 1e-14, ErrorKind::DegenerateState, "ode_rhs: (omega, omega') too close to the origin");
    return -omega * (lambda * (b2w2 + wp2) + (p - 2.0) * beta * beta * wp2) / denom;
}

namespace {

ode::Rhs profile_rhs(double p, double beta)
{
    return [p, beta](double, const ode::State& y) -> ode::State { return {y[1], ode_rhs(p, beta, y[0], y[1])}; };
}

}  // namespace

Trajectory integrate_omega(double p, double beta, std::span<const double> grid, double slope0,
                           const ode::Tolerances& tol)
{
    check_exponent(p);
    require(beta >= 1.0, ErrorKind::Validation, "integrate_omega: beta must be >= 1");
    require(!grid.empty() && grid.front() >= 0.0, ErrorKind::Validation, "integrate_omega: grid must start at >= 0");
    require(std::is_sorted(grid.begin(), grid.end()), ErrorKind::Validation, "integrate_omega: grid must ascend");
    const ode::DormandPrince solver(profile_rhs(p, beta), tol);
    const auto states = solver.integrate(0.0, {0.0, slope0}, grid);
    Trajectory out;
    out.theta.assign(grid.begin(), grid.end());
    out.omega.reserve(states.size());
    out.omega_prime.reserve(states.size());
    for (const auto& s : states) {
        out.omega.push_back(s[0]);
        out.omega_prime.push_back(s[1]);
    }
    return out;
}

double first_zero(double p, double beta, const ode::Tolerances& tol)
{
    check_exponent(p);
    require(beta >= 1.0, ErrorKind::Validation, "first_zero: beta must be >= 1");
    const ode::DormandPrince solver(profile_rhs(p, beta), tol);
    return solver.first_crossing(0.0, {0.0, 1.0}, 4.0 * std::numbers::pi,
                                 [](const ode::State& y) { return y[0]; }, 1e-13);
}

double beta_by_shooting(double p, int k, const ShootingOptions& opts)
{
    check_exponent(p);
    check_mode(k);
    const double target = std::numbers::pi / static_cast<double>(k);

    struct Probe {
        double beta;
        double zero;
    };
    std::vector<Probe> path;
    auto probe = [&](double beta) {
        const double z = first_zero(p, beta, opts.integrator);
        for (const auto& prev : path) {
            const bool ordered = (prev.beta < beta) ? (prev.zero > z) : (prev.zero < z);
            if (!ordered && prev.beta != beta) {
                char msg[200];
                std::snprintf(msg, sizeof(msg),
                              "beta_by_shooting: first zero not decreasing in beta (beta=%.12g -> %.12g, "
                              "beta=%.12g -> %.12g)",
                              prev.beta, prev.zero, beta, z);
                fail(ErrorKind::SearchFailure, msg);
            }
        }
        path.push_back({beta, z});
        return z - target;
    };

    double lo = 1.0;
    const double f_lo = probe(lo);
    if (f_lo <= 1e-9) {
        // The antiperiod at beta = 1 is pi, so the root sits on the left end (k = 1).
        return lo;
    }
    double hi = 2.0;
    while (probe(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        require(hi <= opts.max_bracket, ErrorKind::BracketFailure, "beta_by_shooting: bracket exceeded B = 64");
    }
    while (hi - lo > opts.beta_tol) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

OmegaProfile::OmegaProfile(std::vector<double> grid, std::vector<double> omega, std::vector<double> omega_prime,
                           std::vector<double> omega_second, double antiperiod)
    : grid_(std::move(grid)),
      omega_(std::move(omega)),
      omega_prime_(std::move(omega_prime)),
      omega_second_(std::move(omega_second)),
      antiperiod_(antiperiod)
{
    require(grid_.size() >= 2 && omega_.size() == grid_.size() && omega_prime_.size() == grid_.size() &&
                omega_second_.size() == grid_.size(),
            ErrorKind::Validation, "OmegaProfile: inconsistent table sizes");
    require(antiperiod_ > 0.0, ErrorKind::Validation, "OmegaProfile: antiperiod must be positive");
}

OmegaProfile::Sample OmegaProfile::eval(double theta) const
{
    const double period_count = std::floor(theta / antiperiod_);
    double t = theta - period_count * antiperiod_;
    const double sign = std::fmod(std::abs(period_count), 2.0) == 1.0 ? -1.0 : 1.0;
    const std::size_t m = grid_.size() - 1;
    const double h = antiperiod_ / static_cast<double>(m);
    t = std::clamp(t, 0.0, antiperiod_);
    const auto i = std::min(static_cast<std::size_t>(t / h), m - 1);
    const double s = (t - grid_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double s4 = s3 * s;
    const double s5 = s4 * s;
    // Quintic Hermite basis on [0, 1].
    const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double h3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    const double h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double h5 = 0.5 * s3 - s4 + 0.5 * s5;
    const double d0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    const double d1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    const double d2 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
    const double d3 = -d0;
    const double d4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    const double d5 = 1.5 * s2 - 4.0 * s3 + 2.5 * s4;

    const double f0 = omega_[i], f1 = omega_[i + 1];
    const double g0 = omega_prime_[i], g1 = omega_prime_[i + 1];
    const double c0 = omega_second_[i], c1 = omega_second_[i + 1];
    const double value = f0 * h0 + h * g0 * h1 + h * h * c0 * h2 + f1 * h3 + h * g1 * h4 + h * h * c1 * h5;
    const double slope = (f0 * d0 + f1 * d3) / h + g0 * d1 + g1 * d4 + h * (c0 * d2 + c1 * d5);
    return {sign * value, sign * slope};
}

SpectralPair tabulate(double p, int k, int m, const ode::Tolerances& tol)
{
    check_exponent(p);
    check_mode(k);
    require(m >= 64, ErrorKind::Validation, "tabulate: resolution must be >= 64");
    SpectralPair pair;
    pair.k = k;
    pair.p = p;
    pair.beta = beta_closed_form(p, k);
    pair.lambda2 = lambda_eig(2, pair.beta, p);
    pair.quadratic_residual = std::abs(exponent_quadratic(p, k, pair.beta));

    const double antiperiod = std::numbers::pi / static_cast<double>(k);
    std::vector<double> grid(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) {
        grid[static_cast<std::size_t>(i)] = antiperiod * static_cast<double>(i) / static_cast<double>(m);
    }
    grid.back() = antiperiod;
    Trajectory traj = integrate_omega(p, pair.beta, grid, 1.0, tol);
    std::vector<double> second(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        second[i] = ode_rhs(p, pair.beta, traj.omega[i], traj.omega_prime[i]);
    }
    pair.endpoint_residual = std::abs(traj.omega.back());
    pair.profile = OmegaProfile(std::move(grid), std::move(traj.omega), std::move(traj.omega_prime),
                                std::move(second), antiperiod);
    return pair;
}

std::string profile_csv(const SpectralPair& pair)
{
    std::ostringstream out;
    out << "theta,omega,omega_prime\n";
    const auto& prof = pair.profile;
    for (std::size_t i = 0; i < prof.grid().size(); ++i) {
        out << format17(prof.grid()[i]) << ',' << format17(prof.omega()[i]) << ','
            << format17(prof.omega_prime()[i]) << '\n';
    }
    return out.str();
}

nlohmann::json summary_json(const SpectralPair& pair)
{
    return {{"p", pair.p},
            {"k", pair.k},
            {"beta", pair.beta},
            {"lambda2", pair.lambda2},
            {"antiperiod", pair.profile.antiperiod()},
            {"residuals",
             {{"quadratic", pair.quadratic_residual}, {"endpoint", pair.endpoint_residual}}}};
}

}  // namespace plap::spectral

#pragma once

#include "plap/core.hpp"
#include "plap/ode.hpp"

#include <json.hpp>

#include <span>
#include <vector>

namespace plap::spectral {

/// Root >= 1 of (2k-1) X^2 - [(p k^2 + (p-2)(2k-1)) / (p-1)] X + k^2 = 0.
double beta_closed_form(double p, int k);

/// Left-hand side of the exponent quadratic at X (zero at the exponent).
double exponent_quadratic(double p, int k, double x);

/// lambda_{n,beta} = beta (n - 1 + (beta - 1)(p - 1)).
double lambda_eig(int n, double beta, double p);

/// omega'' from the profile equation
///   -((b^2 w^2 + w'^2)^{(p-2)/2} w')' = lambda_2 (b^2 w^2 + w'^2)^{(p-2)/2} w
/// expanded into explicit second-order form.
double ode_rhs(double p, double beta, double omega, double omega_prime);

/// Profile state (omega, omega') sampled on an ascending grid.
struct Trajectory {
    std::vector<double> theta;
    std::vector<double> omega;
    std::vector<double> omega_prime;
};

/// Integrates the profile equation from (omega, omega')(0) = (omega0, slope0)
/// and records the state at each grid node.
Trajectory integrate_omega(double p, double beta, std::span<const double> grid, double slope0 = 1.0,
                           const ode::Tolerances& tol = {});

/// First theta > 0 where omega vanishes (located to 1e-10).
double first_zero(double p, double beta, const ode::Tolerances& tol = {});

struct ShootingOptions {
    ode::Tolerances integrator{};
    double beta_tol = 1e-11;
    double max_bracket = 64.0;
};

/// Solves first_zero(p, beta) = pi / k for beta by bracketing and bisection.
double beta_by_shooting(double p, int k, const ShootingOptions& opts = {});

/// Antiperiodic profile on [0, pi/k], extended by omega(t + pi/k) = -omega(t).
/// Values between nodes use quintic Hermite interpolation on
/// (omega, omega', omega'').
class OmegaProfile {
public:
    OmegaProfile() = default;
    OmegaProfile(std::vector<double> grid, std::vector<double> omega, std::vector<double> omega_prime,
                 std::vector<double> omega_second, double antiperiod);

    struct Sample {
        double omega;
        double omega_prime;
    };

    /// Interpolated (omega, omega') at any real theta.
    [[nodiscard]] Sample eval(double theta) const;

    [[nodiscard]] const std::vector<double>& grid() const noexcept { return grid_; }
    [[nodiscard]] const std::vector<double>& omega() const noexcept { return omega_; }
    [[nodiscard]] const std::vector<double>& omega_prime() const noexcept { return omega_prime_; }
    [[nodiscard]] const std::vector<double>& omega_second() const noexcept { return omega_second_; }
    [[nodiscard]] double antiperiod() const noexcept { return antiperiod_; }

private:
    std::vector<double> grid_;
    std::vector<double> omega_;
    std::vector<double> omega_prime_;
    std::vector<double> omega_second_;
    double antiperiod_ = 0.0;
};

struct SpectralPair {
    int k = 1;
    double p = 2.0;
    double beta = 1.0;
    double lambda2 = 1.0;
    OmegaProfile profile;
    double quadratic_residual = 0.0;
    double endpoint_residual = 0.0;  // |omega(pi/k)|
};

/// Closed-form exponent plus the profile on m + 1 uniform nodes of [0, pi/k].
SpectralPair tabulate(double p, int k, int m = 512, const ode::Tolerances& tol = {});

/// CSV `theta,omega,omega_prime` with 17 significant digits (no header comments).
std::string profile_csv(const SpectralPair& pair);
nlohmann::json summary_json(const SpectralPair& pair);

}  // namespace plap::spectral

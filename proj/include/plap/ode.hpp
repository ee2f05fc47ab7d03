#pragma once

#include "plap/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace plap::ode {

using State = std::array<double, 2>;
using Rhs = std::function<State(double, const State&)>;

struct Tolerances {
    double rtol = 1e-10;
    double atol = 1e-10;
    double initial_step = 1e-3;
    double max_step = 0.05;
    std::size_t max_steps = 2'000'000;
};

/// One Dormand-Prince 5(4) step. Returns the 5th-order solution; `error`
/// receives the embedded 4th/5th-order difference.
State dopri_step(const Rhs& f, double t, const State& y, const State& f0, double h, State& error);

/// Adaptive Dormand-Prince integrator. Steps are clipped so that every
/// requested output time is hit exactly.
class DormandPrince {
public:
    DormandPrince(Rhs f, Tolerances tol = {}) : f_(std::move(f)), tol_(tol) {}

    /// Integrates from (t0, y0) and records the state at each of `outputs`
    /// (ascending, all >= t0).
    std::vector<State> integrate(double t0, const State& y0, std::span<const double> outputs) const;

    /// Integrates until `event(y)` changes sign from positive to nonpositive
    /// for t > t0, then locates the crossing to `event_tol` by bisection on
    /// single re-taken steps. Throws SearchFailure when t_max is reached.
    double first_crossing(double t0, const State& y0, double t_max,
                          const std::function<double(const State&)>& event, double event_tol) const;

    [[nodiscard]] std::size_t last_step_count() const noexcept { return steps_; }

private:
    struct Accepted {
        double t;
        State y;
        State f;
        double h_next;
    };

    Accepted advance(double t, const State& y, const State& fy, double h, double h_cap) const;

    Rhs f_;
    Tolerances tol_;
    mutable std::size_t steps_ = 0;
};

}  // namespace plap::ode

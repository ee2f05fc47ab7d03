#include "plap/ode.hpp"

#include <limits>

namespace plap::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
// b - b* (difference between 5th and embedded 4th order weights)
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms)
{
    State out = y;
    for (const auto& [w, k] : terms) {
        out[0] += h * w * (*k)[0];
        out[1] += h * w * (*k)[1];
    }
    return out;
}

}  // namespace

State dopri_step(const Rhs& f, double t, const State& y, const State& k1, double h, State& error)
{
    const State k2 = f(t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = f(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = f(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y5 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f(t + h, y5);
    for (int i = 0; i < 2; ++i) {
        error[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    return y5;
}

DormandPrince::Accepted DormandPrince::advance(double t, const State& y, const State& fy, double h,
                                               double h_cap) const
{
    h = std::min(h, h_cap);
    for (;;) {
        require(h > 1e-14 * std::max(1.0, std::abs(t)), ErrorKind::Integration,
                "integrator: step size underflow");
        require(++steps_ <= tol_.max_steps, ErrorKind::Integration, "integrator: step budget exhausted");
        State err{};
        const State y_new = dopri_step(f_, t, y, fy, h, err);
        double norm = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double scale = tol_.atol + tol_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            norm += (err[i] / scale) * (err[i] / scale);
        }
        norm = std::sqrt(norm / 2.0);
        require(std::isfinite(norm) && std::isfinite(y_new[0]) && std::isfinite(y_new[1]),
                ErrorKind::Integration, "integrator: non-finite state");
        if (norm <= 1.0) {
            const double grow = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
            return Accepted{t + h, y_new, f_(t + h, y_new), std::min(h * grow, tol_.max_step)};
        }
        h *= std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 0.9);
    }
}

std::vector<State> DormandPrince::integrate(double t0, const State& y0, std::span<const double> outputs) const
{
    steps_ = 0;
    std::vector<State> result;
    result.reserve(outputs.size());
    double t = t0;
    State y = y0;
    State fy = f_(t, y);
    double h = tol_.initial_step;
    for (const double target : outputs) {
        require(target >= t - 1e-15, ErrorKind::Validation, "integrator: output times must ascend");
        while (target - t > 1e-14 * std::max(1.0, std::abs(target))) {
            const double remaining = target - t;
            const bool clipped = h >= remaining;
            const Accepted acc = advance(t, y, fy, h, remaining);
            const bool landed = target - acc.t <= 1e-14 * std::max(1.0, std::abs(target));
            t = landed ? target : acc.t;
            y = acc.y;
            fy = acc.f;
            // A clipped final step says nothing about the natural step size.
            h = clipped && landed ? std::max(h, acc.h_next) : acc.h_next;
        }
        result.push_back(y);
    }
    return result;
}

double DormandPrince::first_crossing(double t0, const State& y0, double t_max,
                                     const std::function<double(const State&)>& event, double event_tol) const
{
    steps_ = 0;
    double t = t0;
    State y = y0;
    State fy = f_(t, y);
    double h = tol_.initial_step;
    while (t < t_max) {
        const Accepted acc = advance(t, y, fy, h, t_max - t);
        if (event(acc.y) <= 0.0) {
            // Bracket [t, acc.t]: bisect on the length of a single step from t.
            double lo = 0.0;
            double hi = acc.t - t;
            while (hi - lo > event_tol) {
                const double mid = 0.5 * (lo + hi);
                State err{};
                const State ym = dopri_step(f_, t, y, fy, mid, err);
                if (event(ym) > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return t + 0.5 * (lo + hi);
        }
        t = acc.t;
        y = acc.y;
        fy = acc.f;
        h = acc.h_next;
    }
    fail(ErrorKind::SearchFailure, "integrator: no crossing found before t_max");
}

}  // namespace plap::ode

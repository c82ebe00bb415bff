#pragma once

// Adaptive Dormand-Prince 5(4) integration of autonomous systems, driven one
// accepted step at a time so callers can clip at output times and watch for
// events between steps.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "jacobi3/errors.hpp"

namespace jacobi3 {

struct Tolerances {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.1;
    double initial_step = 1e-3;
};

template <std::size_t N>
class AdaptiveIntegrator {
public:
    using State = std::array<double, N>;
    /// dy/dt = f(y); the time is not passed since every system here is autonomous.
    using Rhs = std::function<void(const State& y, State& dydt)>;

    explicit AdaptiveIntegrator(Rhs rhs, Tolerances tol = {})
        : rhs_(std::move(rhs)), tol_(tol), controlled_(boost::numeric::odeint::make_controlled<Stepper>(tol.atol, tol.rtol)),
          dt_(tol.initial_step)
    {
    }

    /// Advances y from t by one accepted step, never past t_limit; returns the
    /// new time. y must be the state left by the previous call; call reset()
    /// before starting from a different state. Throws StepFailure if the step
    /// size underflows or the state stops being finite.
    double step(State& y, double t, double t_limit)
    {
        namespace odeint = boost::numeric::odeint;
        auto system = [this](const State& x, State& dxdt, double) { rhs_(x, dxdt); };
        double h = std::min({dt_, t_limit - t, tol_.max_step});
        for (;;) {
            const double floor = 1e-14 * std::max(1.0, std::fabs(t));
            if (!(h > floor)) {
                throw StepFailure("step size underflow at t = " + std::to_string(t));
            }
            State trial = y;
            double t_trial = t;
            double h_trial = h;
            const bool clipped = h < dt_;
            if (controlled_.try_step(system, trial, t_trial, h_trial) == odeint::success) {
                if (std::all_of(trial.begin(), trial.end(), [](double v) { return std::isfinite(v); })) {
                    y = trial;
                    // A step shortened to hit t_limit says nothing about the
                    // admissible size, so keep the larger proposal.
                    dt_ = clipped ? std::max(dt_, h_trial) : h_trial;
                    return t_limit - t_trial <= 1e-15 * std::max(1.0, std::fabs(t_limit)) ? t_limit : t_trial;
                }
                controlled_.reset();
                h *= 0.25;
            } else {
                h = h_trial;
            }
        }
    }

    /// One uncontrolled Dormand-Prince step of size h from y (h may be 0).
    [[nodiscard]] State single_step(const State& y, double h) const
    {
        State out = y;
        if (h == 0.0) return out;
        Stepper stepper;
        auto system = [this](const State& x, State& dxdt, double) { rhs_(x, dxdt); };
        stepper.do_step(system, out, 0.0, h);
        return out;
    }

    void reset() { controlled_.reset(); }

    [[nodiscard]] double step_size() const { return dt_; }

private:
    using Stepper = boost::numeric::odeint::runge_kutta_dopri5<State>;
    using Controlled = typename boost::numeric::odeint::result_of::make_controlled<Stepper>::type;

    Rhs rhs_;
    Tolerances tol_;
    Controlled controlled_;
    double dt_;
};

/// n fixed Dormand-Prince steps of size h, for order studies.
template <std::size_t N>
[[nodiscard]] std::array<double, N> integrate_fixed(const typename AdaptiveIntegrator<N>::Rhs& rhs,
                                                    std::array<double, N> y, double h, std::size_t n)
{
    boost::numeric::odeint::runge_kutta_dopri5<std::array<double, N>> stepper;
    auto system = [&](const std::array<double, N>& x, std::array<double, N>& dxdt, double) { rhs(x, dxdt); };
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        stepper.do_step(system, y, t, h);
        t += h;
    }
    return y;
}

} // namespace jacobi3

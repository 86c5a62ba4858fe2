#pragma once

#include "wecs/drivetrain.hpp"
#include "wecs/scenario.hpp"
#include "wecs/timeseries.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace wecs::engine {

/// One classical fourth-order Runge-Kutta step of x' = f(t, x).
template <std::size_t N, class F>
std::array<double, N> rk4_step(F&& f, double t, double h, const std::array<double, N>& x)
{
    auto axpy = [](const std::array<double, N>& base, double s, const std::array<double, N>& d) {
        std::array<double, N> r;
        for (std::size_t i = 0; i < N; ++i)
            r[i] = base[i] + s * d[i];
        return r;
    };
    const std::array<double, N> k1 = f(t, x);
    const std::array<double, N> k2 = f(t + h / 2.0, axpy(x, h / 2.0, k1));
    const std::array<double, N> k3 = f(t + h / 2.0, axpy(x, h / 2.0, k2));
    const std::array<double, N> k4 = f(t + h, axpy(x, h, k3));
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

/// Fixed-step RK4 from t0 to t1. The final step is shortened if (t1 - t0)
/// is not a whole number of steps.
template <std::size_t N, class F>
std::array<double, N> integrate_fixed(F&& f, std::array<double, N> x, double t0, double t1, double dt)
{
    const auto steps = static_cast<long long>(std::floor((t1 - t0) / dt * (1.0 + 1e-12)));
    for (long long k = 0; k < steps; ++k)
        x = rk4_step(f, t0 + static_cast<double>(k) * dt, dt, x);
    const double t = t0 + static_cast<double>(steps) * dt;
    if (t1 - t > 1e-12 * dt)
        x = rk4_step(f, t, t1 - t, x);
    return x;
}

/// Discrete inputs changed only by events.
struct InputState {
    bool grid_healthy = true;
    bool connected = true;
    std::optional<double> wind_override;  // set by wind_step events
    double load_torque = 0.0;
};

/// Inputs at time t before any event at t is applied.
InputState initial_inputs(const scenario::Scenario& s);
void apply_event(InputState& in, const scenario::Event& e);
drivetrain::CoupledInputs coupled_inputs(const scenario::Scenario& s, const InputState& in, double t);

/// Explicit events plus the jump of a step wind profile, in time order.
std::vector<scenario::Event> effective_events(const scenario::Scenario& s);

struct Equilibrium {
    generator::GeneratorState state;
    double omega_r = 0.0;
    double turbine_torque = 0.0;
    double generator_torque = 0.0;
    /// Largest |derivative| divided by its channel scale.
    double residual = 0.0;
};

/// Settled operating point at the t = 0 inputs. Throws NumericalError when
/// no stable equilibrium exists (e.g. turbine torque beyond pull-out).
Equilibrium find_equilibrium(const scenario::Scenario& s);

/// Same, for explicit inputs.
Equilibrium find_equilibrium(const drivetrain::CoupledSystem& sys, const drivetrain::CoupledInputs& in);

/// Integrates the coupled system with fixed-step RK4, splitting steps at
/// event times and wind-profile knots. Output is bit-identical for identical
/// scenarios.
TimeSeries integrate(const scenario::Scenario& s);

} // namespace wecs::engine

#include "wecs/engine.hpp"

#include "wecs/error.hpp"
#include "wecs/log.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wecs::engine {

using generator::GeneratorState;
using scenario::Event;
using scenario::EventKind;
using State = std::array<double, 5>;  // I_d, I_q, I_dr, I_qr, slip

namespace {

constexpr const char* kStateNames[] = {"Id", "Iq", "Idr", "Iqr", "s"};

GeneratorState unpack(const State& x) { return {x[0], x[1], x[2], x[3], x[4]}; }

State pack(const GeneratorState& s) { return {s.i_d, s.i_q, s.i_dr, s.i_qr, s.slip}; }

State derivative(const drivetrain::CoupledSystem& sys, const GeneratorState& state,
                 const drivetrain::CoupledInputs& in)
{
    const auto d = drivetrain::coupled_derivative(sys, state, in);
    return {d.currents[0], d.currents[1], d.currents[2], d.currents[3], d.slip};
}

// Slip rate produced by a rated-torque imbalance.
double slip_rate_scale(const drivetrain::CoupledSystem& sys)
{
    const auto& g = sys.generator;
    if (sys.variant == generator::EquationVariant::uncorrected)
        return g.m_rated / (2.0 * std::acos(-1.0));
    const double gear = sys.drivetrain.gear_ratio;
    return g.pole_pairs * gear * gear * g.m_rated / (g.omega_s * sys.drivetrain.inertia);
}

double residual_of(const drivetrain::CoupledSystem& sys, const GeneratorState& state, const State& d)
{
    double current_scale = 1.0;
    for (int i = 0; i < 4; ++i)
        current_scale = std::max(current_scale, std::abs(pack(state)[i]));
    current_scale *= sys.generator.omega_s;
    double r = 0.0;
    for (int i = 0; i < 4; ++i)
        r = std::max(r, std::abs(d[i]) / current_scale);
    return std::max(r, std::abs(d[4]) / slip_rate_scale(sys));
}

} // namespace

InputState initial_inputs(const scenario::Scenario& s)
{
    InputState in;
    in.connected = s.grid.connected;
    return in;
}

void apply_event(InputState& in, const Event& e)
{
    switch (e.kind) {
    case EventKind::short_circuit:
        in.grid_healthy = false;
        break;
    case EventKind::restore_grid:
        in.grid_healthy = true;
        break;
    case EventKind::wind_step:
        in.wind_override = e.value;
        break;
    case EventKind::load_step:
        in.load_torque = e.value;
        break;
    case EventKind::connect:
        in.connected = true;
        break;
    }
}

drivetrain::CoupledInputs coupled_inputs(const scenario::Scenario& s, const InputState& in, double t)
{
    drivetrain::CoupledInputs c;
    c.wind_speed = in.wind_override ? *in.wind_override : s.wind.at(t);
    if (in.grid_healthy)
        c.grid = scenario::nominal_grid(s);
    c.connected = in.connected;
    c.load_torque = in.load_torque;
    return c;
}

std::vector<Event> effective_events(const scenario::Scenario& s)
{
    std::vector<Event> events = s.events;
    if (s.wind.kind == scenario::WindKind::step)
        events.push_back({s.wind.step_time, EventKind::wind_step, s.wind.step_speed});
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    return events;
}

Equilibrium find_equilibrium(const drivetrain::CoupledSystem& sys, const drivetrain::CoupledInputs& in)
{
    if (!in.connected)
        throw NumericalError("no electrical equilibrium with the stator disconnected");

    auto state_at = [&](double slip) {
        const auto i = generator::steady_state_currents(sys.generator, slip, in.grid, sys.variant);
        return GeneratorState{i[0], i[1], i[2], i[3], slip};
    };
    auto slip_rate = [&](double slip) { return derivative(sys, state_at(slip), in)[4]; };

    const double scale = slip_rate_scale(sys);
    double slip = 0.0;
    const double r0 = slip_rate(0.0);
    if (std::abs(r0) > 1e-14 * scale) {
        // Move the way the rotor drifts until the slip rate changes sign; the
        // first crossing is the stable branch of the torque-slip curve.
        const double direction = r0 < 0.0 ? -1.0 : 1.0;
        constexpr double step = 1e-3;
        constexpr int max_steps = 500;
        double lo = 0.0, r_lo = r0, hi = 0.0;
        bool bracketed = false;
        for (int k = 1; k <= max_steps; ++k) {
            hi = direction * step * k;
            const double r_hi = slip_rate(hi);
            if ((r_hi > 0.0) != (r_lo > 0.0) || r_hi == 0.0) {
                bracketed = true;
                break;
            }
            lo = hi;
            r_lo = r_hi;
        }
        if (!bracketed)
            throw NumericalError("no equilibrium: drive torque exceeds the generator pull-out range");
        for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi)
                break;
            const double r_mid = slip_rate(mid);
            if (r_mid == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((r_mid > 0.0) == (r_lo > 0.0)) {
                lo = mid;
                r_lo = r_mid;
            } else {
                hi = mid;
            }
        }
        slip = std::abs(slip_rate(lo)) <= std::abs(slip_rate(hi)) ? lo : hi;
    }

    Equilibrium eq;
    eq.state = state_at(slip);
    const auto out = drivetrain::coupled_outputs(sys, eq.state, in);
    eq.omega_r = out.omega_r;
    eq.turbine_torque = out.turbine_torque;
    eq.generator_torque = out.generator_torque;
    eq.residual = residual_of(sys, eq.state, derivative(sys, eq.state, in));
    if (!(eq.residual < 1e-8))
        throw NumericalError("equilibrium search did not converge (residual " + std::to_string(eq.residual) + ")");
    return eq;
}

Equilibrium find_equilibrium(const scenario::Scenario& s)
{
    scenario::validate(s);
    const auto sys = scenario::build_system(s);
    return find_equilibrium(sys, coupled_inputs(s, initial_inputs(s), 0.0));
}

TimeSeries integrate(const scenario::Scenario& s)
{
    scenario::validate(s);
    const auto sys = scenario::build_system(s);
    const double dt = s.solver.dt;
    const auto decimation = static_cast<std::size_t>(s.solver.decimation);
    const auto steps = static_cast<std::size_t>(std::llround(s.solver.t_end / dt));
    const double tol = 1e-9 * dt;

    if (dt > 0.1 / s.generator.omega_s)
        log::warn("solver.dt = " + format_number(dt) + " is coarse for omega_s = " +
                  format_number(s.generator.omega_s) + " (recommended <= 0.1/omega_s)");

    const std::vector<Event> events = effective_events(s);
    for (const Event& e : events) {
        const double k = e.t / (dt * static_cast<double>(decimation));
        if (std::abs(k - std::round(k)) * dt * static_cast<double>(decimation) > tol)
            log::warn("event at t = " + format_number(e.t) + " is not on the output grid; it is integrated "
                      "exactly but will not appear as a sample");
    }

    // Wind knots are kinks, not jumps: split there without changing inputs.
    std::vector<double> knots;
    if (s.wind.kind == scenario::WindKind::gust)
        for (double t : s.wind.times)
            if (t > 0.0 && t < s.solver.t_end)
                knots.push_back(t);

    InputState in = initial_inputs(s);
    State x{};
    if (s.solver.initial == scenario::InitialCondition::equilibrium) {
        if (!in.connected)
            throw ValidationError("solver.initial: equilibrium start requires grid.connected = true");
        x = pack(find_equilibrium(sys, coupled_inputs(s, in, 0.0)).state);
    } else {
        x[4] = s.solver.initial_slip;
    }

    // Output channel selection.
    const auto& all = scenario::all_channels();
    std::vector<std::size_t> selected;
    if (s.output.channels.empty()) {
        for (std::size_t i = 0; i < all.size(); ++i)
            selected.push_back(i);
    } else {
        for (const auto& name : s.output.channels)
            selected.push_back(static_cast<std::size_t>(std::find(all.begin(), all.end(), name) - all.begin()));
    }
    std::vector<std::string> names;
    for (std::size_t i : selected)
        names.push_back(all[i]);
    TimeSeries series{names};
    series.reserve(steps / decimation + 1);

    std::size_t next_event = 0;
    auto apply_due = [&](double t) {
        while (next_event < events.size() && events[next_event].t <= t + tol) {
            apply_event(in, events[next_event]);
            ++next_event;
        }
    };

    auto rhs = [&](double t, const State& state) {
        return derivative(sys, unpack(state), coupled_inputs(s, in, t));
    };

    std::vector<double> row(selected.size());
    auto record = [&](double t) {
        const auto inputs = coupled_inputs(s, in, t);
        const GeneratorState g = unpack(x);
        const auto out = drivetrain::coupled_outputs(sys, g, inputs);
        const std::array<double, 10> values{g.i_d, g.i_q, g.i_dr, g.i_qr, g.slip, out.omega_r,
                                            out.turbine_torque, out.generator_torque, inputs.wind_speed,
                                            inputs.grid.u_d};
        for (std::size_t i = 0; i < selected.size(); ++i)
            row[i] = values[selected[i]];
        series.append(t, row);
    };

    auto check_finite = [&](double t) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!std::isfinite(x[i]))
                throw NumericalError("non-finite state in channel " + std::string{kStateNames[i]} + " at t = " +
                                     format_number(t));
    };

    std::size_t next_knot = 0;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        apply_due(t);
        if (k % decimation == 0)
            record(t);
        if (k == steps)
            break;

        const double t_next = static_cast<double>(k + 1) * dt;
        double t_cur = t;
        while (true) {
            while (next_knot < knots.size() && knots[next_knot] <= t_cur + tol)
                ++next_knot;
            double t_stop = t_next;
            if (next_event < events.size() && events[next_event].t < t_stop - tol)
                t_stop = events[next_event].t;
            if (next_knot < knots.size() && knots[next_knot] < t_stop - tol)
                t_stop = knots[next_knot];
            try {
                x = rk4_step(rhs, t_cur, t_stop - t_cur, x);
            } catch (const NumericalError& e) {
                throw NumericalError(std::string{e.what()} + " in the step from t = " + format_number(t_cur));
            }
            check_finite(t_stop);
            if (t_stop == t_next)
                break;
            t_cur = t_stop;
            apply_due(t_cur);
        }
    }
    return series;
}

} // namespace wecs::engine

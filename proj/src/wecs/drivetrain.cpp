#include "wecs/drivetrain.hpp"

#include "wecs/error.hpp"

#include <cmath>
#include <string>

namespace wecs::drivetrain {

using generator::EquationVariant;

void validate(const Drivetrain& d)
{
    if (!(d.inertia > 0.0) || !std::isfinite(d.inertia))
        throw ValidationError("drivetrain inertia must be > 0");
    if (!(d.gear_ratio > 0.0) || !std::isfinite(d.gear_ratio))
        throw ValidationError("drivetrain gear_ratio must be > 0");
}

double rotor_speed(const generator::GeneratorParams& g, const Drivetrain& d, double slip)
{
    const double synchronous = g.omega_s / g.pole_pairs;
    return synchronous * (1.0 - slip) / d.gear_ratio;
}

double slip_from_speed(const generator::GeneratorParams& g, const Drivetrain& d, double omega_r)
{
    const double synchronous = g.omega_s / g.pole_pairs;
    return (synchronous - omega_r * d.gear_ratio) / synchronous;
}

CoupledOutputs coupled_outputs(const CoupledSystem& sys, const generator::GeneratorState& state,
                               const CoupledInputs& in)
{
    CoupledOutputs out;
    out.omega_r = rotor_speed(sys.generator, sys.drivetrain, state.slip);
    if (!(out.omega_r >= 0.0))
        throw NumericalError("turbine rotor speed went negative (slip " + std::to_string(state.slip) + ")");
    out.turbine_torque = turbine::torque(sys.turbine, in.wind_speed, out.omega_r);
    out.generator_torque = in.connected ? generator::electromagnetic_torque(sys.generator, state, sys.variant) : 0.0;
    return out;
}

double accelerating_torque(const CoupledSystem& sys, const CoupledOutputs& out, const CoupledInputs& in)
{
    const double gear = sys.drivetrain.gear_ratio;
    if (sys.drivetrain.torque_sign_mode == TorqueSignMode::magnitude)
        return std::abs(out.turbine_torque) - gear * std::abs(out.generator_torque) - in.load_torque;
    return out.turbine_torque - gear * out.generator_torque - in.load_torque;
}

CoupledDerivative coupled_derivative(const CoupledSystem& sys, const generator::GeneratorState& state,
                                     const CoupledInputs& in)
{
    const CoupledOutputs out = coupled_outputs(sys, state, in);
    const auto& g = sys.generator;
    const double gear = sys.drivetrain.gear_ratio;
    // d(slip)/d(omega_r)
    const double slip_per_speed = -g.pole_pairs * gear / g.omega_s;

    CoupledDerivative d;
    d.currents = in.connected ? generator::electrical_derivative(g, state, in.grid, sys.variant)
                              : generator::open_stator_derivative(g, state);

    if (sys.variant == EquationVariant::uncorrected) {
        // Uncorrected slip equation; drive torque referred to the generator shaft.
        const double m_mech = (out.turbine_torque - in.load_torque) / gear;
        generator::GeneratorState s = state;
        if (!in.connected)
            s.i_d = s.i_q = 0.0;
        d.slip = generator::slip_derivative(g, s, m_mech, sys.drivetrain.inertia, sys.variant);
        d.omega_r = d.slip / slip_per_speed;
        return d;
    }

    d.omega_r = accelerating_torque(sys, out, in) / sys.drivetrain.inertia;
    d.slip = slip_per_speed * d.omega_r;
    return d;
}

} // namespace wecs::drivetrain

#pragma once

#include "wecs/generator.hpp"
#include "wecs/turbine.hpp"

namespace wecs::drivetrain {

enum class TorqueSignMode {
    magnitude,  // J dw/dt = |M_uT| - |M_eG|
    signed_,    // J dw/dt = M_uT - M_eG, needed once the machine can motor
};

struct Drivetrain {
    double inertia = 0.0;     // J_T,G referred to the turbine shaft [kg*m^2]
    double gear_ratio = 1.0;  // generator speed / turbine speed
    TorqueSignMode torque_sign_mode = TorqueSignMode::magnitude;

    bool operator==(const Drivetrain&) const = default;
};

void validate(const Drivetrain& d);

/// Slip is the single source of truth; turbine speed follows from it.
double rotor_speed(const generator::GeneratorParams& g, const Drivetrain& d, double slip);
double slip_from_speed(const generator::GeneratorParams& g, const Drivetrain& d, double omega_r);

struct CoupledInputs {
    double wind_speed = 0.0;        // [m/s]
    generator::GridInput grid;
    bool connected = true;          // stator connected to the grid
    double load_torque = 0.0;       // extra resisting torque on the turbine shaft [N*m]
};

struct CoupledDerivative {
    generator::CurrentVector currents{};
    double slip = 0.0;
    double omega_r = 0.0;  // d(omega_r)/dt, consistent with the slip derivative
};

/// Quantities logged alongside the state.
struct CoupledOutputs {
    double omega_r = 0.0;
    double turbine_torque = 0.0;  // M_uT
    double generator_torque = 0.0;  // M_eG
};

struct CoupledSystem {
    turbine::TurbineModel turbine;
    generator::GeneratorParams generator;
    generator::EquationVariant variant = generator::EquationVariant::standard;
    Drivetrain drivetrain;
};

CoupledOutputs coupled_outputs(const CoupledSystem& sys, const generator::GeneratorState& state,
                               const CoupledInputs& in);

/// Net accelerating torque on the turbine shaft per the single-mass balance:
/// |M_uT| - gear*|M_eG| - load (or the signed form).
double accelerating_torque(const CoupledSystem& sys, const CoupledOutputs& out, const CoupledInputs& in);

/// Electrical derivative from the generator model plus the single-mass
/// mechanical equation. Throws NumericalError if the rotor reverses.
CoupledDerivative coupled_derivative(const CoupledSystem& sys, const generator::GeneratorState& state,
                                     const CoupledInputs& in);

} // namespace wecs::drivetrain

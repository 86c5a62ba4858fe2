#pragma once

#include <array>
#include <optional>

namespace wecs::generator {

enum class EquationVariant {
    standard,       // flux-linkage dq model in a frame rotating at omega_s
    uncorrected,    // extra slip factors on the speed terms, 1/L1 on one term, no q-axis drive
};

/// Squirrel-cage machine constants, rotor quantities referred to the stator.
struct GeneratorParams {
    double r1 = 0.0;       // stator resistance [ohm]
    double r2 = 0.0;       // rotor resistance [ohm]
    double l1 = 0.0;       // stator self inductance [H]
    double l2 = 0.0;       // rotor self inductance [H]
    double m = 0.0;        // mutual inductance [H]
    int pole_pairs = 1;
    double omega_s = 0.0;  // reference frame electrical speed [rad/s]
    double u_rated = 0.0;  // [V]
    double f_rated = 0.0;  // [Hz]
    double m_rated = 0.0;  // [N*m]
    std::optional<double> torque_constant;  // k_T override

    double leakage_determinant() const { return l1 * l2 - m * m; }
    double leakage_coefficient() const { return 1.0 - m * m / (l1 * l2); }

    bool operator==(const GeneratorParams&) const = default;
};

/// Throws ValidationError unless all constants are positive, the leakage
/// determinant is positive and sigma lies in (0, 0.3).
void validate(const GeneratorParams& params);

/// (3/2)*p for the standard model, 1 for the uncorrected one, unless overridden.
double torque_constant(const GeneratorParams& params, EquationVariant variant);

struct GeneratorState {
    double i_d = 0.0;   // stator d-axis current [A]
    double i_q = 0.0;   // stator q-axis current [A]
    double i_dr = 0.0;  // rotor d-axis current [A]
    double i_qr = 0.0;  // rotor q-axis current [A]
    double slip = 0.0;  // (omega_s - omega_M) / omega_s

    bool operator==(const GeneratorState&) const = default;
};

struct GridInput {
    double u_d = 0.0;  // [V]
    double u_q = 0.0;  // [V]

    bool operator==(const GridInput&) const = default;
};

// Order: I_d, I_q, I_dr, I_qr.
using CurrentVector = std::array<double, 4>;
using Matrix4 = std::array<std::array<double, 4>, 4>;

/// dI/dt = a * I + b * [U_d, U_q] at a fixed slip. Every entry carries the
/// 1/(L1*L2 - M^2) factor.
struct ElectricalSystem {
    Matrix4 a{};
    std::array<std::array<double, 2>, 4> b{};

    CurrentVector derivative(const CurrentVector& currents, const GridInput& grid) const;
};

/// Assembles the linear electrical system for the given slip. Only the
/// leakage determinant is checked, so degenerate parameter sets (M = 0) can
/// be inspected.
ElectricalSystem electrical_system(const GeneratorParams& params, double slip, EquationVariant variant);

inline CurrentVector currents_of(const GeneratorState& s) { return {s.i_d, s.i_q, s.i_dr, s.i_qr}; }

CurrentVector electrical_derivative(const GeneratorParams& params, const GeneratorState& state,
                                    const GridInput& grid, EquationVariant variant = EquationVariant::standard);

/// Derivative with the stator open (generator disconnected): stator currents
/// stay at zero and rotor currents decay through R2.
CurrentVector open_stator_derivative(const GeneratorParams& params, const GeneratorState& state);

/// Braking torque k_T*M*(I_d*I_qr - I_q*I_dr); positive when generating.
double electromagnetic_torque(const GeneratorParams& params, const GeneratorState& state,
                              EquationVariant variant = EquationVariant::standard);

/// ds/dt for an external drive torque m_mech on the generator shaft and shaft
/// inertia j. Standard: -(p / (omega_s * J)) * (m_mech - M_eG). Uncorrected:
/// (1/2pi)(M*I_d*I_qr - M*I_q*I_dr + M_rez) with M_rez = m_mech.
double slip_derivative(const GeneratorParams& params, const GeneratorState& state, double m_mech,
                       double inertia, EquationVariant variant = EquationVariant::standard);

/// Currents at which the electrical derivative vanishes for a fixed slip.
/// Throws NumericalError if the system is singular.
CurrentVector steady_state_currents(const GeneratorParams& params, double slip, const GridInput& grid,
                                    EquationVariant variant = EquationVariant::standard);

} // namespace wecs::generator

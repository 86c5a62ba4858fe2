#pragma once

#include <optional>

namespace wecs::setpoint {

enum class VoltageLaw {
    torque_ratio,  // U = U_N (f/f_N) sqrt(M/M_N)
    quadratic,     // U = U_N (f/f_N)^2, fan/turbine load where M ~ f^2
    linear,        // U = U_N (f/f_N)
};

struct RatedPoint {
    double u_n = 0.0;  // [V]
    double f_n = 0.0;  // [Hz]
    double m_n = 0.0;  // [N*m]
};

inline constexpr double kDefaultOvervoltageLimit = 1.1;

/// Rotor speed reference keeping the tip-speed ratio at lambda0 [rad/s].
double preset_speed(double lambda0, double radius, double wind_speed);

/// Stator voltage reference for supply frequency f. The result is clamped to
/// overvoltage_limit * U_N.
double preset_voltage(const RatedPoint& rated, double f, VoltageLaw law,
                      std::optional<double> torque_ratio = std::nullopt,
                      double overvoltage_limit = kDefaultOvervoltageLimit);

} // namespace wecs::setpoint

#pragma once

#include <optional>

namespace wecs::turbine {

inline constexpr double kDefaultAlpha = 2.25;
inline constexpr double kDefaultBeta = 2.55;
inline constexpr double kDefaultAirDensity = 1.225;
inline constexpr double kBetzLimit = 16.0 / 27.0;

struct TurbineGeometry {
    double radius = 0.0;      // R_T [m]
    double swept_area = 0.0;  // S_T [m^2]

    // S_T defaults to the rotor disc pi*R_T^2; an explicit area overrides it.
    static TurbineGeometry from_radius(double radius, std::optional<double> swept_area = std::nullopt);

    bool operator==(const TurbineGeometry&) const = default;
};

struct AirModel {
    double rho = kDefaultAirDensity;  // [kg/m^3]

    bool operator==(const AirModel&) const = default;
};

/// Fitted Cp(lambda) = C_M0*lambda + a*lambda^alpha - b*lambda^beta and the
/// matching torque coefficient Cm = Cp/lambda.
struct TurbineCoefficients {
    double lambda0 = 0.0;
    double cm0 = 0.0;
    double a = 0.0;
    double b = 0.0;
    double alpha = kDefaultAlpha;
    double beta = kDefaultBeta;
    double cp_max = 0.0;

    bool operator==(const TurbineCoefficients&) const = default;
};

/// Everything needed to evaluate shaft power and torque.
struct TurbineModel {
    TurbineGeometry geometry;
    AirModel air;
    TurbineCoefficients coefficients;
};

void validate(const TurbineGeometry& geometry);
void validate(const AirModel& air);

/// Empirical peak power coefficient for a turbine whose optimum tip-speed
/// ratio is lambda0.
double peak_power_coefficient(double lambda0);

/// Start torque coefficient, 0.2 / lambda0^2.
double start_torque_coefficient(double lambda0);

/// Fits a and b so that the Cp curve peaks at (lambda0, Cp_max): Cp(lambda0) =
/// Cp_max and dCp/dlambda = 0 there. With `simplified` the start-torque term
/// is dropped (C_M0 = 0), which is the high-lambda0 approximation.
///
/// lambda0 outside [1, 15] is accepted with a warning; lambda0 <= 0, exponents
/// outside alpha in [2, 2.5], beta in [2.3, 2.8], beta <= alpha, and fits whose
/// Cp_max leaves (0, Betz) throw ValidationError.
TurbineCoefficients fit_coefficients(double lambda0,
                                     double alpha = kDefaultAlpha,
                                     double beta = kDefaultBeta,
                                     bool simplified = false);

/// Power coefficient. Not clamped: negative values mark the braking region.
double cp(const TurbineCoefficients& c, double lambda);

/// Torque coefficient; cm(0) = C_M0.
double cm(const TurbineCoefficients& c, double lambda);

double tip_speed_ratio(const TurbineGeometry& geometry, double wind_speed, double omega);

/// Useful shaft power [W]. Zero at zero wind.
double power(const TurbineGeometry& geometry, const AirModel& air, const TurbineCoefficients& c,
             double wind_speed, double omega);

/// Useful shaft torque [N*m]. Finite at standstill (start torque).
double torque(const TurbineGeometry& geometry, const AirModel& air, const TurbineCoefficients& c,
              double wind_speed, double omega);

inline double power(const TurbineModel& m, double wind_speed, double omega)
{
    return power(m.geometry, m.air, m.coefficients, wind_speed, omega);
}

inline double torque(const TurbineModel& m, double wind_speed, double omega)
{
    return torque(m.geometry, m.air, m.coefficients, wind_speed, omega);
}

} // namespace wecs::turbine

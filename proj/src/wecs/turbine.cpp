#include "wecs/turbine.hpp"

#include "wecs/error.hpp"
#include "wecs/log.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace wecs::turbine {
namespace {

void require_finite_nonnegative(double value, const char* name)
{
    if (!std::isfinite(value) || value < 0.0)
        throw ValidationError(std::string{name} + " must be finite and >= 0, got " + std::to_string(value));
}

} // namespace

TurbineGeometry TurbineGeometry::from_radius(double radius, std::optional<double> swept_area)
{
    TurbineGeometry g{radius, swept_area.value_or(std::numbers::pi * radius * radius)};
    validate(g);
    return g;
}

void validate(const TurbineGeometry& geometry)
{
    if (!(geometry.radius > 0.0) || !std::isfinite(geometry.radius))
        throw ValidationError("turbine radius must be > 0");
    if (!(geometry.swept_area > 0.0) || !std::isfinite(geometry.swept_area))
        throw ValidationError("turbine swept_area must be > 0");
}

void validate(const AirModel& air)
{
    if (!(air.rho > 0.0) || !std::isfinite(air.rho))
        throw ValidationError("air density rho must be > 0");
}

double peak_power_coefficient(double lambda0)
{
    return 0.3 * std::pow(lambda0, 0.35) - 0.0014 * lambda0 * lambda0;
}

double start_torque_coefficient(double lambda0) { return 0.2 / (lambda0 * lambda0); }

TurbineCoefficients fit_coefficients(double lambda0, double alpha, double beta, bool simplified)
{
    if (!std::isfinite(lambda0) || lambda0 <= 0.0)
        throw ValidationError("lambda0 must be > 0, got " + std::to_string(lambda0));
    if (lambda0 < 1.0 || lambda0 > 15.0)
        log::warn("lambda0 = " + std::to_string(lambda0) + " is outside the fitted range [1, 15]");
    if (!(alpha >= 2.0 && alpha <= 2.5))
        throw ValidationError("alpha must lie in [2, 2.5], got " + std::to_string(alpha));
    if (!(beta >= 2.3 && beta <= 2.8))
        throw ValidationError("beta must lie in [2.3, 2.8], got " + std::to_string(beta));
    if (!(beta > alpha))
        throw ValidationError("beta must be greater than alpha");

    TurbineCoefficients c;
    c.lambda0 = lambda0;
    c.alpha = alpha;
    c.beta = beta;
    c.cp_max = peak_power_coefficient(lambda0);
    if (!(c.cp_max > 0.0 && c.cp_max < kBetzLimit))
        throw ValidationError("fitted Cp_max = " + std::to_string(c.cp_max) + " lies outside (0, Betz limit)");
    c.cm0 = simplified ? 0.0 : start_torque_coefficient(lambda0);

    // Value and slope conditions at lambda0:
    //   a*A1 - b*B1 = C1   (Cp(lambda0) = Cp_max)
    //   a*A2 - b*B2 = C2   (Cp'(lambda0) = 0)
    const double a1 = std::pow(lambda0, alpha);
    const double a2 = alpha * std::pow(lambda0, alpha - 1.0);
    const double b1 = std::pow(lambda0, beta);
    const double b2 = beta * std::pow(lambda0, beta - 1.0);
    const double c1 = c.cp_max - lambda0 * c.cm0;
    const double c2 = -c.cm0;

    const double denominator = b1 / a1 - b2 / a2;
    if (std::abs(denominator) < 1e-12)
        throw ValidationError("degenerate fit: alpha and beta too close");

    c.b = (c2 / a2 - c1 / a1) / denominator;
    c.a = b2 / a2 * c.b + c2 / a2;
    if (!(c.a > 0.0 && c.b > 0.0))
        throw ValidationError("fit produced non-positive a or b");
    return c;
}

double cp(const TurbineCoefficients& c, double lambda)
{
    if (!(lambda >= 0.0))
        throw ValidationError("tip-speed ratio must be >= 0");
    return c.cm0 * lambda + c.a * std::pow(lambda, c.alpha) - c.b * std::pow(lambda, c.beta);
}

double cm(const TurbineCoefficients& c, double lambda)
{
    if (!(lambda >= 0.0))
        throw ValidationError("tip-speed ratio must be >= 0");
    return c.cm0 + c.a * std::pow(lambda, c.alpha - 1.0) - c.b * std::pow(lambda, c.beta - 1.0);
}

double tip_speed_ratio(const TurbineGeometry& geometry, double wind_speed, double omega)
{
    return omega * geometry.radius / wind_speed;
}

double power(const TurbineGeometry& geometry, const AirModel& air, const TurbineCoefficients& c,
             double wind_speed, double omega)
{
    require_finite_nonnegative(wind_speed, "wind speed");
    require_finite_nonnegative(omega, "turbine speed");
    if (wind_speed == 0.0)
        return 0.0;
    const double lambda = tip_speed_ratio(geometry, wind_speed, omega);
    // Cp as lambda*Cm: one evaluation path for both power and torque, so
    // P = M*omega holds to rounding even where Cp crosses zero.
    return lambda * cm(c, lambda) * air.rho * (wind_speed * wind_speed * wind_speed / 2.0) * geometry.swept_area;
}

double torque(const TurbineGeometry& geometry, const AirModel& air, const TurbineCoefficients& c,
              double wind_speed, double omega)
{
    require_finite_nonnegative(wind_speed, "wind speed");
    require_finite_nonnegative(omega, "turbine speed");
    if (wind_speed == 0.0)
        return 0.0;
    const double lambda = tip_speed_ratio(geometry, wind_speed, omega);
    return cm(c, lambda) * air.rho * (wind_speed * wind_speed / 2.0) * geometry.swept_area * geometry.radius;
}

} // namespace wecs::turbine

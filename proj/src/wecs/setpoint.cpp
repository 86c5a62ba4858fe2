#include "wecs/setpoint.hpp"

#include "wecs/error.hpp"

#include <algorithm>
#include <cmath>

namespace wecs::setpoint {

double preset_speed(double lambda0, double radius, double wind_speed)
{
    if (!(lambda0 > 0.0))
        throw ValidationError("lambda0 must be > 0");
    if (!(radius > 0.0))
        throw ValidationError("turbine radius must be > 0");
    if (!(wind_speed >= 0.0))
        throw ValidationError("wind speed must be >= 0");
    return lambda0 * wind_speed / radius;
}

double preset_voltage(const RatedPoint& rated, double f, VoltageLaw law, std::optional<double> torque_ratio,
                      double overvoltage_limit)
{
    if (!(rated.u_n > 0.0) || !(rated.f_n > 0.0))
        throw ValidationError("rated voltage and frequency must be > 0");
    if (!(f >= 0.0))
        throw ValidationError("frequency must be >= 0");
    if (!(overvoltage_limit > 0.0))
        throw ValidationError("overvoltage limit must be > 0");

    const double ratio = f / rated.f_n;
    double u = 0.0;
    switch (law) {
    case VoltageLaw::torque_ratio:
        if (!torque_ratio)
            throw ValidationError("torque-ratio law needs the torque ratio M/M_N");
        if (!(*torque_ratio >= 0.0))
            throw ValidationError("torque ratio must be >= 0");
        u = rated.u_n * ratio * std::sqrt(*torque_ratio);
        break;
    case VoltageLaw::quadratic:
        u = rated.u_n * ratio * ratio;
        break;
    case VoltageLaw::linear:
        u = rated.u_n * ratio;
        break;
    }
    return std::min(u, overvoltage_limit * rated.u_n);
}

} // namespace wecs::setpoint

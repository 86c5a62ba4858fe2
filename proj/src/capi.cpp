#include "wecs.h"

#include "wecs/converter.hpp"
#include "wecs/engine.hpp"
#include "wecs/error.hpp"
#include "wecs/scenario.hpp"
#include "wecs/setpoint.hpp"
#include "wecs/timeseries.hpp"
#include "wecs/turbine.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

struct wecs_series {
    wecs::TimeSeries series;
};

struct wecs_scenario {
    wecs::scenario::Scenario scenario;
};

namespace {

thread_local std::string last_error;

template <class F>
wecs_status guarded(F&& body)
{
    try {
        body();
        return WECS_OK;
    } catch (const wecs::ValidationError& e) {
        last_error = e.what();
        return WECS_ERR_INVALID_ARGUMENT;
    } catch (const wecs::NumericalError& e) {
        last_error = e.what();
        return WECS_ERR_NUMERICAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return WECS_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return WECS_ERR_INTERNAL;
    }
}

template <class T>
void require(const T* ptr, const char* name)
{
    if (ptr == nullptr)
        throw wecs::ValidationError(std::string{name} + " must not be NULL");
}

wecs::turbine::TurbineCoefficients to_cpp(const wecs_turbine_coefficients& c)
{
    return {c.lambda0, c.cm0, c.a, c.b, c.alpha, c.beta, c.cp_max};
}

wecs::turbine::TurbineGeometry to_cpp(const wecs_turbine_geometry& g)
{
    return wecs::turbine::TurbineGeometry::from_radius(
        g.radius, g.swept_area > 0.0 ? std::optional<double>{g.swept_area} : std::nullopt);
}

wecs::converter::PwmConfig to_cpp(const wecs_pwm_config& c) { return {c.f_carrier, c.f_ref, c.m_a}; }

bool switch_bit(int v, const char* name)
{
    if (v != 0 && v != 1)
        throw wecs::ValidationError(std::string{name} + " must be 0 or 1");
    return v == 1;
}

char* duplicate(const std::string& text)
{
    auto* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out == nullptr)
        throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* wecs_last_error(void) { return last_error.c_str(); }

const char* wecs_status_string(wecs_status status)
{
    switch (status) {
    case WECS_OK: return "ok";
    case WECS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WECS_ERR_NUMERICAL: return "numerical failure";
    case WECS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* wecs_version(void) { return "0.1.0"; }

wecs_status wecs_fit_coefficients(double lambda0, double alpha, double beta, int simplified,
                                  wecs_turbine_coefficients* out)
{
    return guarded([&] {
        require(out, "out");
        const auto c = wecs::turbine::fit_coefficients(lambda0, alpha, beta, simplified != 0);
        *out = {c.lambda0, c.cm0, c.a, c.b, c.alpha, c.beta, c.cp_max};
    });
}

wecs_status wecs_cp(const wecs_turbine_coefficients* c, double lambda, double* out)
{
    return guarded([&] {
        require(c, "coefficients");
        require(out, "out");
        *out = wecs::turbine::cp(to_cpp(*c), lambda);
    });
}

wecs_status wecs_cm(const wecs_turbine_coefficients* c, double lambda, double* out)
{
    return guarded([&] {
        require(c, "coefficients");
        require(out, "out");
        *out = wecs::turbine::cm(to_cpp(*c), lambda);
    });
}

wecs_status wecs_turbine_power(const wecs_turbine_geometry* geometry, double rho, const wecs_turbine_coefficients* c,
                               double wind_speed, double omega, double* out)
{
    return guarded([&] {
        require(geometry, "geometry");
        require(c, "coefficients");
        require(out, "out");
        const wecs::turbine::AirModel air{rho};
        wecs::turbine::validate(air);
        *out = wecs::turbine::power(to_cpp(*geometry), air, to_cpp(*c), wind_speed, omega);
    });
}

wecs_status wecs_turbine_torque(const wecs_turbine_geometry* geometry, double rho, const wecs_turbine_coefficients* c,
                                double wind_speed, double omega, double* out)
{
    return guarded([&] {
        require(geometry, "geometry");
        require(c, "coefficients");
        require(out, "out");
        const wecs::turbine::AirModel air{rho};
        wecs::turbine::validate(air);
        *out = wecs::turbine::torque(to_cpp(*geometry), air, to_cpp(*c), wind_speed, omega);
    });
}

wecs_status wecs_preset_speed(double lambda0, double radius, double wind_speed, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = wecs::setpoint::preset_speed(lambda0, radius, wind_speed);
    });
}

wecs_status wecs_preset_voltage(double u_n, double f_n, double f, wecs_voltage_law law, int has_torque_ratio,
                                double torque_ratio, double* out)
{
    return guarded([&] {
        require(out, "out");
        using wecs::setpoint::VoltageLaw;
        VoltageLaw cpp_law;
        switch (law) {
        case WECS_LAW_TORQUE_RATIO: cpp_law = VoltageLaw::torque_ratio; break;
        case WECS_LAW_QUADRATIC: cpp_law = VoltageLaw::quadratic; break;
        case WECS_LAW_LINEAR: cpp_law = VoltageLaw::linear; break;
        default: throw wecs::ValidationError("unknown voltage law");
        }
        const wecs::setpoint::RatedPoint rated{u_n, f_n, 1.0};
        *out = wecs::setpoint::preset_voltage(rated, f, cpp_law,
                                              has_torque_ratio ? std::optional<double>{torque_ratio} : std::nullopt);
    });
}

void wecs_series_free(wecs_series* series) { delete series; }

size_t wecs_series_rows(const wecs_series* series) { return series ? series->series.rows() : 0; }

size_t wecs_series_channels(const wecs_series* series) { return series ? series->series.channel_count() : 0; }

const char* wecs_series_channel_name(const wecs_series* series, size_t index)
{
    if (series == nullptr || index >= series->series.channel_count())
        return nullptr;
    return series->series.channel_names()[index].c_str();
}

const double* wecs_series_time(const wecs_series* series)
{
    return series ? series->series.time().data() : nullptr;
}

wecs_status wecs_series_channel(const wecs_series* series, const char* name, const double** data)
{
    return guarded([&] {
        require(series, "series");
        require(name, "name");
        require(data, "data");
        *data = series->series.channel(name).data();
    });
}

wecs_status wecs_series_read_csv(const char* path, wecs_series** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new wecs_series{wecs::TimeSeries::read_csv(path)};
    });
}

wecs_status wecs_series_write_csv(const wecs_series* series, const char* path)
{
    return guarded([&] {
        require(series, "series");
        require(path, "path");
        series->series.write_csv(path);
    });
}

wecs_status wecs_series_to_csv(const wecs_series* series, char** out)
{
    return guarded([&] {
        require(series, "series");
        require(out, "out");
        *out = duplicate(series->series.to_csv());
    });
}

void wecs_string_free(char* text) { std::free(text); }

wecs_status wecs_phase_voltages(double v_cc, int s_a, int s_b, int s_c, wecs_inverter_variant variant, double out[3])
{
    return guarded([&] {
        require(out, "out");
        const wecs::converter::SwitchState sw{switch_bit(s_a, "s_a"), switch_bit(s_b, "s_b"), switch_bit(s_c, "s_c")};
        const auto v = variant == WECS_INVERTER_UNCORRECTED ? wecs::converter::InverterVariant::uncorrected
                                                               : wecs::converter::InverterVariant::corrected;
        const auto u = wecs::converter::phase_voltages({v_cc}, sw, v);
        out[0] = u.a;
        out[1] = u.b;
        out[2] = u.c;
    });
}

wecs_status wecs_pwm_switch_states(const wecs_pwm_config* cfg, double t, int out[3])
{
    return guarded([&] {
        require(cfg, "cfg");
        require(out, "out");
        const auto c = to_cpp(*cfg);
        wecs::converter::validate(c);
        const auto s = wecs::converter::pwm_switch_states(c, t);
        out[0] = s.a;
        out[1] = s.b;
        out[2] = s.c;
    });
}

wecs_status wecs_inverter_simulate(double v_cc, const wecs_pwm_config* cfg, double load_r, double load_l,
                                   double duration, double dt, wecs_series** out)
{
    return guarded([&] {
        require(cfg, "cfg");
        require(out, "out");
        *out = new wecs_series{
            wecs::converter::simulate_rl_load({v_cc}, to_cpp(*cfg), {load_r, load_l}, duration, dt)};
    });
}

wecs_status wecs_thd(const double* samples, size_t count, double dt, double f0, int max_harmonic, double* out)
{
    return guarded([&] {
        require(samples, "samples");
        require(out, "out");
        *out = wecs::converter::thd({samples, count}, dt, f0, max_harmonic);
    });
}

wecs_status wecs_harmonic_amplitude(const double* samples, size_t count, double dt, double f0, int h, double* out)
{
    return guarded([&] {
        require(samples, "samples");
        require(out, "out");
        if (h < 1)
            throw wecs::ValidationError("harmonic order must be >= 1");
        const auto amps = wecs::converter::harmonic_amplitudes({samples, count}, dt, f0, h);
        if (static_cast<std::size_t>(h) > amps.size())
            throw wecs::ValidationError("harmonic order above the Nyquist limit");
        *out = amps[static_cast<std::size_t>(h) - 1];
    });
}

wecs_status wecs_scenario_load(const char* path, wecs_scenario** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new wecs_scenario{wecs::scenario::load(path)};
    });
}

wecs_status wecs_scenario_parse(const char* toml_text, wecs_scenario** out)
{
    return guarded([&] {
        require(toml_text, "toml_text");
        require(out, "out");
        *out = new wecs_scenario{wecs::scenario::parse(toml_text)};
    });
}

void wecs_scenario_free(wecs_scenario* scenario) { delete scenario; }

wecs_status wecs_scenario_dump(const wecs_scenario* scenario, char** out)
{
    return guarded([&] {
        require(scenario, "scenario");
        require(out, "out");
        *out = duplicate(wecs::scenario::dump(scenario->scenario));
    });
}

int wecs_scenario_equal(const wecs_scenario* a, const wecs_scenario* b)
{
    if (a == nullptr || b == nullptr)
        return 0;
    return a->scenario == b->scenario ? 1 : 0;
}

const char* wecs_scenario_name(const wecs_scenario* scenario)
{
    return scenario ? scenario->scenario.name.c_str() : nullptr;
}

wecs_status wecs_simulate(const wecs_scenario* scenario, wecs_series** out)
{
    return guarded([&] {
        require(scenario, "scenario");
        require(out, "out");
        *out = new wecs_series{wecs::engine::integrate(scenario->scenario)};
    });
}

wecs_status wecs_find_equilibrium(const wecs_scenario* scenario, wecs_operating_point* out)
{
    return guarded([&] {
        require(scenario, "scenario");
        require(out, "out");
        const auto eq = wecs::engine::find_equilibrium(scenario->scenario);
        *out = {eq.state.i_d,  eq.state.i_q,    eq.state.i_dr,         eq.state.i_qr,          eq.state.slip,
                eq.omega_r,    eq.turbine_torque, eq.generator_torque, eq.residual};
    });
}

} // extern "C"

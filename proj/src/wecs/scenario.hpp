#pragma once

#include "wecs/drivetrain.hpp"
#include "wecs/generator.hpp"
#include "wecs/turbine.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wecs::scenario {

struct TurbineConfig {
    double radius = 0.0;
    std::optional<double> swept_area;
    double rho = turbine::kDefaultAirDensity;
    double lambda0 = 7.0;
    double alpha = turbine::kDefaultAlpha;
    double beta = turbine::kDefaultBeta;
    bool simplified = false;

    bool operator==(const TurbineConfig&) const = default;
};

struct GridConfig {
    std::optional<double> u_d;  // absent when a converter sets the voltage
    double u_q = 0.0;
    bool connected = true;

    bool operator==(const GridConfig&) const = default;
};

/// Averaged inverter feeding the stator: U_d = m_a * V_cc / 2.
struct ConverterConfig {
    double v_cc = 0.0;
    double modulation_index = 0.0;

    bool operator==(const ConverterConfig&) const = default;
};

enum class WindKind { constant, step, gust };

struct WindProfile {
    WindKind kind = WindKind::constant;
    double speed = 0.0;       // constant value, or the value before the step
    double step_time = 0.0;   // step only
    double step_speed = 0.0;  // step only
    std::vector<double> times;   // gust: piecewise-linear knots
    std::vector<double> speeds;

    /// Continuous part of the profile. A step profile reports `speed`
    /// throughout; its jump is delivered as an implicit wind_step event.
    double at(double t) const;

    bool operator==(const WindProfile&) const = default;
};

enum class EventKind { short_circuit, restore_grid, wind_step, load_step, connect };

struct Event {
    double t = 0.0;
    EventKind kind = EventKind::short_circuit;
    double value = 0.0;  // wind speed for wind_step, torque for load_step

    bool operator==(const Event&) const = default;
};

enum class InitialCondition { equilibrium, zero };

struct SolverConfig {
    double dt = 1e-4;
    double t_end = 1.0;
    std::string method = "rk4";
    int decimation = 10;
    InitialCondition initial = InitialCondition::equilibrium;
    double initial_slip = 0.0;  // used with initial = zero

    bool operator==(const SolverConfig&) const = default;
};

struct OutputConfig {
    std::vector<std::string> channels;  // empty: every channel

    bool operator==(const OutputConfig&) const = default;
};

struct Scenario {
    std::string name;
    TurbineConfig turbine;
    generator::GeneratorParams generator;
    generator::EquationVariant variant = generator::EquationVariant::standard;
    drivetrain::Drivetrain drivetrain;
    GridConfig grid;
    std::optional<ConverterConfig> converter;
    WindProfile wind;
    std::vector<Event> events;
    SolverConfig solver;
    OutputConfig output;

    bool operator==(const Scenario&) const = default;
};

/// Every loggable channel, in CSV order (after "t").
const std::vector<std::string>& all_channels();

/// Throws ValidationError naming the offending key.
void validate(const Scenario& s);

/// Parses TOML text. `source` is used in error messages.
Scenario parse(std::string_view toml_text, std::string_view source = "<scenario>");
Scenario load(const std::filesystem::path& path);

/// Canonical TOML form; parse(dump(s)) == s.
std::string dump(const Scenario& s);

turbine::TurbineModel build_turbine(const TurbineConfig& cfg);
drivetrain::CoupledSystem build_system(const Scenario& s);
/// Grid voltage while the grid is healthy.
generator::GridInput nominal_grid(const Scenario& s);

std::string_view to_string(EventKind kind);
std::string_view to_string(WindKind kind);
std::string_view to_string(generator::EquationVariant variant);
std::string_view to_string(drivetrain::TorqueSignMode mode);
std::string_view to_string(InitialCondition initial);

} // namespace wecs::scenario

#pragma once

#include "wecs/timeseries.hpp"

#include <span>
#include <vector>

namespace wecs::converter {

struct SwitchState {
    bool a = false;
    bool b = false;
    bool c = false;

    bool operator==(const SwitchState&) const = default;
};

struct DcLink {
    double v_cc = 0.0;  // [V]
};

enum class InverterVariant {
    corrected,      // u_c = V_cc(-S_a - S_b + 2 S_c)/3, phase voltages sum to zero
    uncorrected,  // u_c = V_cc(-S_a - S_b - S_c)/3, phase voltages do not sum to zero
};

struct PhaseVoltages {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Load phase voltages of the three-switch inverter (isolated neutral).
PhaseVoltages phase_voltages(const DcLink& dc, const SwitchState& sw,
                             InverterVariant variant = InverterVariant::corrected);

struct PwmConfig {
    double f_carrier = 3000.0;  // [Hz]
    double f_ref = 60.0;        // [Hz]
    double m_a = 0.9;           // amplitude modulation index
};

void validate(const PwmConfig& cfg);

/// Unit-amplitude symmetric triangle: -1 at whole cycles, +1 at half cycles.
double triangle_carrier(double cycles);

/// Sine-triangle comparison. Leg phases are 0, -2pi/3, -4pi/3.
SwitchState pwm_switch_states(const PwmConfig& cfg, double t);

struct RlLoad {
    double r = 0.0;  // [ohm]
    double l = 0.0;  // [H]
};

/// Drives a balanced star RL load from the PWM inverter. The switch state is
/// held over each step and the RL response is integrated exactly, so the
/// only error is the switching-instant quantization. Requires
/// dt <= 1/(20*f_carrier). Channels: ua, ub, uc, ia, ib, ic.
TimeSeries simulate_rl_load(const DcLink& dc, const PwmConfig& cfg, const RlLoad& load, double duration,
                            double dt);

inline constexpr int kDefaultMaxHarmonic = 50;

/// Amplitudes A_1..A_H of the harmonics of f0 over a window that must span a
/// whole number (>= 5) of fundamental periods. The cap H is clamped to the
/// Nyquist limit; pass max_harmonic <= 0 for every harmonic below it.
std::vector<double> harmonic_amplitudes(std::span<const double> samples, double dt, double f0,
                                        int max_harmonic = kDefaultMaxHarmonic);

/// 100 * sqrt(sum_{h>=2} A_h^2) / A_1, in percent.
double thd(std::span<const double> samples, double dt, double f0, int max_harmonic = kDefaultMaxHarmonic);

/// The last `periods` whole fundamental periods of a uniformly sampled series.
std::span<const double> trailing_periods(std::span<const double> samples, double dt, double f0, int periods);

} // namespace wecs::converter

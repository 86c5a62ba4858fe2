#include "wecs/converter.hpp"

#include "wecs/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace wecs::converter {

PhaseVoltages phase_voltages(const DcLink& dc, const SwitchState& sw, InverterVariant variant)
{
    const double sa = sw.a ? 1.0 : 0.0;
    const double sb = sw.b ? 1.0 : 0.0;
    const double sc = sw.c ? 1.0 : 0.0;
    const double k = dc.v_cc / 3.0;
    PhaseVoltages u;
    u.a = k * (2.0 * sa - sb - sc);
    u.b = k * (-sa + 2.0 * sb - sc);
    u.c = variant == InverterVariant::corrected ? k * (-sa - sb + 2.0 * sc) : k * (-sa - sb - sc);
    return u;
}

void validate(const PwmConfig& cfg)
{
    if (!(cfg.f_ref > 0.0))
        throw ValidationError("PWM reference frequency must be > 0");
    if (!(cfg.f_carrier > 2.0 * cfg.f_ref))
        throw ValidationError("PWM carrier frequency must exceed twice the reference frequency");
    if (!(cfg.m_a >= 0.0 && cfg.m_a <= 1.0))
        throw ValidationError("PWM modulation index must lie in [0, 1]");
}

double triangle_carrier(double cycles)
{
    const double frac = cycles - std::floor(cycles);
    return 1.0 - 4.0 * std::abs(frac - 0.5);
}

SwitchState pwm_switch_states(const PwmConfig& cfg, double t)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double carrier = triangle_carrier(cfg.f_carrier * t);
    const double theta = two_pi * cfg.f_ref * t;
    return {cfg.m_a * std::sin(theta) >= carrier,
            cfg.m_a * std::sin(theta - two_pi / 3.0) >= carrier,
            cfg.m_a * std::sin(theta - 2.0 * two_pi / 3.0) >= carrier};
}

TimeSeries simulate_rl_load(const DcLink& dc, const PwmConfig& cfg, const RlLoad& load, double duration,
                            double dt)
{
    validate(cfg);
    if (!(dc.v_cc >= 0.0))
        throw ValidationError("DC link voltage must be >= 0");
    if (!(load.r > 0.0) || !(load.l > 0.0))
        throw ValidationError("load R and L must be > 0");
    if (!(duration > 0.0))
        throw ValidationError("duration must be > 0");
    if (!(dt > 0.0) || dt > 1.0 / (20.0 * cfg.f_carrier) * (1.0 + 1e-12))
        throw ValidationError("dt must be in (0, 1/(20*f_carrier)]");

    const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
    const double decay = std::exp(-load.r * dt / load.l);
    TimeSeries out{{"ua", "ub", "uc", "ia", "ib", "ic"}};
    out.reserve(steps + 1);

    std::array<double, 3> i{0.0, 0.0, 0.0};
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        const PhaseVoltages u = phase_voltages(dc, pwm_switch_states(cfg, t));
        const std::array<double, 6> row{u.a, u.b, u.c, i[0], i[1], i[2]};
        out.append(t, row);
        if (k == steps)
            break;
        const std::array<double, 3> uu{u.a, u.b, u.c};
        for (std::size_t ph = 0; ph < 3; ++ph)
            i[ph] = i[ph] * decay + uu[ph] / load.r * (1.0 - decay);
    }
    return out;
}

namespace {

std::size_t whole_periods(std::size_t n, double dt, double f0)
{
    if (!(f0 > 0.0) || !(dt > 0.0))
        throw ValidationError("fundamental frequency and sample step must be > 0");
    const double periods = static_cast<double>(n) * dt * f0;
    const double rounded = std::round(periods);
    if (std::abs(periods - rounded) > 1e-6 * std::max(1.0, periods))
        throw ValidationError("window of " + std::to_string(periods) +
                              " fundamental periods is not a whole number of periods");
    if (rounded < 5.0)
        throw ValidationError("window must span at least 5 fundamental periods");
    return static_cast<std::size_t>(rounded);
}

} // namespace

std::vector<double> harmonic_amplitudes(std::span<const double> samples, double dt, double f0, int max_harmonic)
{
    const std::size_t n = samples.size();
    const std::size_t periods = whole_periods(n, dt, f0);
    // Harmonic h sits in DFT bin h*periods; keep strictly below Nyquist.
    const std::size_t nyquist_h = (n / 2 - 1) / periods;
    std::size_t h_max = max_harmonic <= 0 ? nyquist_h : std::min<std::size_t>(max_harmonic, nyquist_h);
    if (h_max < 1)
        throw ValidationError("sampling too coarse to resolve the fundamental");

    std::vector<double> amplitudes(h_max);
    const double two_pi_over_n = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t h = 1; h <= h_max; ++h) {
        const std::size_t bin = h * periods;
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            // index reduced modulo n keeps the angle small
            const double angle = two_pi_over_n * static_cast<double>((bin * k) % n);
            re += samples[k] * std::cos(angle);
            im -= samples[k] * std::sin(angle);
        }
        amplitudes[h - 1] = 2.0 * std::hypot(re, im) / static_cast<double>(n);
    }
    return amplitudes;
}

double thd(std::span<const double> samples, double dt, double f0, int max_harmonic)
{
    const auto amps = harmonic_amplitudes(samples, dt, f0, max_harmonic);
    double peak = 0.0;
    for (double x : samples)
        peak = std::max(peak, std::abs(x));
    if (!(amps[0] > 1e-12 * peak) || amps[0] < 1e-300)
        throw ValidationError("fundamental amplitude below numerical floor");
    double sum = 0.0;
    for (std::size_t h = 1; h < amps.size(); ++h)
        sum += amps[h] * amps[h];
    return 100.0 * std::sqrt(sum) / amps[0];
}

std::span<const double> trailing_periods(std::span<const double> samples, double dt, double f0, int periods)
{
    if (periods < 1)
        throw ValidationError("periods must be >= 1");
    const double per_period = 1.0 / (f0 * dt);
    const double count = per_period * periods;
    const auto n = static_cast<std::size_t>(std::llround(count));
    if (std::abs(count - static_cast<double>(n)) > 1e-6 * count)
        throw ValidationError("sample step does not divide the fundamental period");
    if (n > samples.size())
        throw ValidationError("series shorter than the requested number of periods");
    return samples.last(n);
}

} // namespace wecs::converter

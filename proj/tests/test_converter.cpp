#include "oracles.hpp"
#include "wecs/converter.hpp"
#include "wecs/error.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace wecs::converter;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sine(int periods, int per_period, double amp, double phase = 0.0)
{
    std::vector<double> x(static_cast<std::size_t>(periods * per_period));
    for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = amp * std::sin(2.0 * kPi * static_cast<double>(k) / per_period + phase);
    return x;
}

std::vector<double> square(int periods, int per_period, double amp)
{
    std::vector<double> x(static_cast<std::size_t>(periods * per_period));
    for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = (static_cast<int>(k) % per_period) < per_period / 2 ? amp : -amp;
    return x;
}

} // namespace

TEST_CASE("truth table of the corrected inverter")
{
    const DcLink dc{600.0};
    for (int code = 0; code < 8; ++code) {
        const SwitchState sw{(code & 4) != 0, (code & 2) != 0, (code & 1) != 0};
        const auto u = phase_voltages(dc, sw);
        CHECK(u.a + u.b + u.c == 0.0);
        for (double line : {u.a - u.b, u.b - u.c, u.c - u.a}) {
            const double n = line / dc.v_cc;
            CHECK((std::abs(n) < 1e-12 || std::abs(std::abs(n) - 1.0) < 1e-12));
        }
    }
    const auto u = phase_voltages(dc, {true, false, false});
    CHECK(u.a == doctest::Approx(400.0));
    CHECK(u.b == doctest::Approx(-200.0));
    CHECK(u.c == doctest::Approx(-200.0));
    const auto zero = phase_voltages(dc, {true, true, true});
    CHECK(zero.a == 0.0);
    CHECK(zero.c == 0.0);
}

TEST_CASE("uncorrected inverter third line")
{
    const DcLink dc{600.0};
    const auto u = phase_voltages(dc, {true, true, true}, InverterVariant::uncorrected);
    CHECK(u.c == doctest::Approx(-600.0));
    CHECK(u.a == 0.0);
    const auto v = phase_voltages(dc, {false, false, true}, InverterVariant::uncorrected);
    CHECK(v.c == doctest::Approx(-200.0));
    const auto w = phase_voltages(dc, {true, false, false}, InverterVariant::uncorrected);
    CHECK(w.c == doctest::Approx(-200.0));
}

TEST_CASE("triangle carrier shape")
{
    CHECK(triangle_carrier(0.0) == -1.0);
    CHECK(triangle_carrier(0.5) == 1.0);
    CHECK(triangle_carrier(0.25) == 0.0);
    CHECK(triangle_carrier(3.75) == 0.0);
    CHECK(triangle_carrier(7.0) == -1.0);
}

TEST_CASE("PWM duty follows the reference")
{
    // Slow reference: over one carrier period the duty is (1 + m sin)/2.
    const PwmConfig cfg{10000.0, 1.0, 0.8};
    for (double t0 : {0.05, 0.2, 0.33, 0.7}) {
        const int n = 4000;
        int on = 0;
        for (int k = 0; k < n; ++k)
            on += pwm_switch_states(cfg, t0 + (k + 0.5) / (n * cfg.f_carrier)).a ? 1 : 0;
        const double duty = static_cast<double>(on) / n;
        CHECK(duty == doctest::Approx(0.5 * (1.0 + 0.8 * std::sin(2 * kPi * t0))).epsilon(3e-3));
    }
    const PwmConfig zero{3000.0, 60.0, 0.0};
    int on = 0;
    const int n = 30000;
    for (int k = 0; k < n; ++k)
        on += pwm_switch_states(zero, (k + 0.5) / (n * 60.0)).b ? 1 : 0;
    CHECK(static_cast<double>(on) / n == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("RL load fundamental matches the averaged inverter")
{
    const DcLink dc{600.0};
    const PwmConfig cfg{3000.0, 60.0, 0.9};
    const RlLoad load{10.0, 0.01};
    const double dt = 1.0 / (60.0 * 2000.0);
    const auto ts = simulate_rl_load(dc, cfg, load, 20.0 / 60.0, dt);
    CHECK(ts.rows() == 2000 * 20 + 1);
    const auto& ia = ts.channel("ia");
    const auto window = trailing_periods(ia, dt, 60.0, 5);
    const auto amps = harmonic_amplitudes(window, dt, 60.0);
    const double expected = 0.9 * 300.0 / std::abs(std::complex<double>(10.0, 2 * kPi * 60.0 * 0.01));
    CHECK(amps[0] == doctest::Approx(expected).epsilon(0.03));
    // balanced: phase currents sum to zero
    for (std::size_t k = 0; k < ts.rows(); k += 997)
        CHECK(std::abs(ts.channel("ia")[k] + ts.channel("ib")[k] + ts.channel("ic")[k]) < 1e-9);
}

TEST_CASE("THD of reference signals")
{
    CHECK(thd(sine(5, 200, 3.0, 0.4), 1.0 / (50.0 * 200), 50.0) < 1e-9);

    const auto sq = square(10, 2000, 1.0);
    const double dt = 1.0 / (50.0 * 2000);
    CHECK(thd(sq, dt, 50.0, 0) == doctest::Approx(oracle::square_wave_thd_infinite()).epsilon(1e-3));
    CHECK(thd(sq, dt, 50.0) == doctest::Approx(oracle::square_wave_thd(50)).epsilon(1e-4));
    CHECK(oracle::square_wave_thd(49) == doctest::Approx(47.297133393449876).epsilon(1e-12));
    CHECK(oracle::square_wave_thd_infinite() == doctest::Approx(48.3425847608679).epsilon(1e-12));

    // Amplitude does not matter.
    const auto sq5 = square(10, 2000, 5.0);
    CHECK(thd(sq5, dt, 50.0) == doctest::Approx(thd(sq, dt, 50.0)).epsilon(1e-12));

    // Known harmonic mix.
    std::vector<double> mix(1000);
    for (std::size_t k = 0; k < mix.size(); ++k) {
        const double th = 2 * kPi * static_cast<double>(k) / 100.0;
        mix[k] = std::sin(th) + 0.1 * std::sin(3 * th) + 0.05 * std::cos(7 * th);
    }
    CHECK(thd(mix, 1.0 / 100.0, 1.0) == doctest::Approx(100.0 * std::hypot(0.1, 0.05)).epsilon(1e-9));
    const auto amps = harmonic_amplitudes(mix, 1.0 / 100.0, 1.0, 8);
    CHECK(amps.size() == 8);
    CHECK(amps[2] == doctest::Approx(0.1));
    CHECK(amps[6] == doctest::Approx(0.05));
}

TEST_CASE("harmonic cap clamps to Nyquist")
{
    const auto x = sine(5, 20, 1.0);
    // 20 samples per period: harmonics up to 9 sit strictly below Nyquist.
    CHECK(harmonic_amplitudes(x, 1.0 / 20.0, 1.0, 50).size() == 9);
    CHECK(harmonic_amplitudes(x, 1.0 / 20.0, 1.0, 0).size() == 9);
    CHECK(harmonic_amplitudes(x, 1.0 / 20.0, 1.0, 4).size() == 4);
}

TEST_CASE("THD decreases as load current rises")
{
    const DcLink dc{600.0};
    const PwmConfig cfg{3000.0, 60.0, 0.9};
    const double dt = 1.0 / (60.0 * 2000.0);
    double previous = 1e300;
    for (double r : {40.0, 20.0, 10.0}) {
        const auto ts = simulate_rl_load(dc, cfg, {r, 0.01}, 20.0 / 60.0, dt);
        const double t = thd(trailing_periods(ts.channel("ia"), dt, 60.0, 5), dt, 60.0);
        CHECK(t < previous);
        previous = t;
    }
}

TEST_CASE("converter errors")
{
    const auto x = sine(5, 100, 1.0);
    CHECK_THROWS_AS(thd(std::span<const double>(x).first(450), 0.01, 1.0), wecs::ValidationError);
    CHECK_THROWS_AS(thd(std::span<const double>(x).first(400), 0.01, 1.0), wecs::ValidationError);
    CHECK_THROWS_AS(thd(x, 0.0, 1.0), wecs::ValidationError);
    CHECK_THROWS_AS(thd(x, 0.01, -1.0), wecs::ValidationError);
    const std::vector<double> zeros(500, 0.0);
    CHECK_THROWS_AS(thd(zeros, 0.01, 1.0), wecs::ValidationError);
    CHECK_THROWS_AS(trailing_periods(x, 0.01, 1.0, 6), wecs::ValidationError);
    CHECK_THROWS_AS(trailing_periods(x, 0.03, 1.0, 2), wecs::ValidationError);
    CHECK_THROWS_AS(trailing_periods(x, 0.01, 1.0, 0), wecs::ValidationError);

    CHECK_THROWS_AS(validate(PwmConfig{100.0, 60.0, 0.9}), wecs::ValidationError);
    CHECK_THROWS_AS(validate(PwmConfig{3000.0, 60.0, 1.2}), wecs::ValidationError);
    CHECK_THROWS_AS(validate(PwmConfig{3000.0, 0.0, 0.5}), wecs::ValidationError);
    CHECK_THROWS_AS(simulate_rl_load({600.0}, {}, {10.0, 0.01}, 0.1, 1e-4), wecs::ValidationError);
    CHECK_THROWS_AS(simulate_rl_load({600.0}, {}, {0.0, 0.01}, 0.1, 1e-5), wecs::ValidationError);
    CHECK_THROWS_AS(simulate_rl_load({-1.0}, {}, {10.0, 0.01}, 0.1, 1e-5), wecs::ValidationError);
    CHECK_THROWS_AS(simulate_rl_load({600.0}, {}, {10.0, 0.01}, 0.0, 1e-5), wecs::ValidationError);
}

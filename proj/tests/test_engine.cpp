#include "oracles.hpp"
#include "wecs/engine.hpp"
#include "wecs/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

using namespace wecs;
using scenario::EventKind;

namespace {

double max_central_difference_error(double dt)
{
    auto s = bench::short_circuit_scenario();
    s.events.clear();
    s.wind.kind = scenario::WindKind::gust;
    s.wind.times = {0.0, 0.02, 0.12};
    s.wind.speeds = {10.0, 10.0, 11.5};
    s.solver.dt = dt;
    s.solver.decimation = 1;
    s.solver.t_end = 0.2;
    const auto ts = engine::integrate(s);
    const auto& w = ts.channel("omega_r");
    const auto& mut = ts.channel("MuT");
    const auto& meg = ts.channel("MeG");
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < ts.rows(); ++k) {
        const double t = ts.time()[k];
        // Skip samples whose stencil straddles a wind kink.
        if (std::abs(t - 0.02) < 1.5 * dt || std::abs(t - 0.12) < 1.5 * dt || t < 0.03)
            continue;
        const double lhs = 500.0 * (w[k + 1] - w[k - 1]) / (2.0 * dt);
        const double rhs = std::abs(mut[k]) - 11.4 * std::abs(meg[k]);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace

TEST_CASE("rk4 is fourth order on x' = -x")
{
    auto f = [](double, const std::array<double, 1>& x) { return std::array<double, 1>{-x[0]}; };
    double previous = 0.0;
    for (double dt : {0.1, 0.05, 0.025}) {
        const auto x = engine::integrate_fixed(f, std::array<double, 1>{1.0}, 0.0, 1.0, dt);
        const double err = std::abs(x[0] - std::exp(-1.0));
        if (previous > 0.0)
            CHECK(previous / err == doctest::Approx(16.0).epsilon(0.05));
        previous = err;
    }
    // Ragged final step lands exactly on t1.
    const auto x = engine::integrate_fixed(f, std::array<double, 1>{1.0}, 0.0, 1.0, 0.3);
    CHECK(x[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
}

TEST_CASE("steady operation stays at equilibrium")
{
    auto s = bench::short_circuit_scenario();
    s.events.clear();
    s.solver.t_end = 0.2;
    const auto ts = engine::integrate(s);
    const auto eq = engine::find_equilibrium(s);
    CHECK(ts.rows() == 201);
    const auto& id = ts.channel("Id");
    const auto& slip = ts.channel("s");
    for (std::size_t k = 0; k < ts.rows(); ++k) {
        CHECK(std::abs(id[k] - eq.state.i_d) < 1e-6 * std::abs(eq.state.i_d));
        CHECK(std::abs(slip[k] - eq.state.slip) < 1e-9);
    }
}

TEST_CASE("output layout and channel selection")
{
    auto s = bench::short_circuit_scenario();
    s.solver.t_end = 0.02;
    s.events.clear();
    const auto ts = engine::integrate(s);
    CHECK(ts.channel_names() == scenario::all_channels());
    CHECK(ts.to_csv().starts_with("t,Id,Iq,Idr,Iqr,s,omega_r,MuT,MeG,v,Ud\r\n"));
    CHECK(ts.time()[1] == doctest::Approx(1e-3).epsilon(1e-12));
    s.output.channels = {"MeG", "s"};
    const auto sel = engine::integrate(s);
    CHECK(sel.channel_names() == std::vector<std::string>{"MeG", "s"});
    CHECK(sel.channel("s") == ts.channel("s"));
}

TEST_CASE("events take effect at their sample")
{
    const auto ts = engine::integrate(bench::short_circuit_scenario());
    const auto& ud = ts.channel("Ud");
    CHECK(ud[99] == doctest::Approx(bench::grid_voltage()));
    CHECK(ud[100] == 0.0);
    // State is continuous: the sample at the event time is still the pre-fault state.
    const auto& id = ts.channel("Id");
    CHECK(id[100] == doctest::Approx(id[99]).epsilon(1e-9));
}

TEST_CASE("events between steps are integrated exactly")
{
    auto run = [](double dt, double t_event) {
        auto s = bench::short_circuit_scenario();
        s.solver.dt = dt;
        s.solver.decimation = static_cast<int>(std::lround(1e-3 / dt));
        s.solver.t_end = 0.2;
        s.events = {{t_event, EventKind::short_circuit, 0.0}};
        return engine::integrate(s);
    };
    const auto split = run(1e-4, 0.10005);
    const auto aligned = run(5e-5, 0.10005);
    const auto early = run(1e-4, 0.1);
    const auto& a = split.channel("Id");
    const auto& b = aligned.channel("Id");
    const auto& c = early.channel("Id");
    double diff = 0.0, shift = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        diff = std::max(diff, std::abs(a[k] - b[k]));
        shift = std::max(shift, std::abs(a[k] - c[k]));
    }
    CHECK(diff < 1e-3 * shift);
}

TEST_CASE("wind step profile and explicit wind_step agree")
{
    auto a = bench::short_circuit_scenario();
    a.events.clear();
    a.solver.t_end = 0.1;
    a.wind.kind = scenario::WindKind::step;
    a.wind.step_time = 0.05;
    a.wind.step_speed = 11.0;
    auto b = a;
    b.wind.kind = scenario::WindKind::constant;
    b.events = {{0.05, EventKind::wind_step, 11.0}};
    const auto ta = engine::integrate(a);
    CHECK(ta == engine::integrate(b));
    CHECK(ta.channel("v")[49] == 10.0);
    CHECK(ta.channel("v")[50] == 11.0);
    CHECK(ta.channel("omega_r")[100] > ta.channel("omega_r")[50]);
}

TEST_CASE("event semantics")
{
    engine::InputState in;
    engine::apply_event(in, {0.0, EventKind::short_circuit, 0.0});
    CHECK_FALSE(in.grid_healthy);
    engine::apply_event(in, {0.0, EventKind::restore_grid, 0.0});
    CHECK(in.grid_healthy);
    engine::apply_event(in, {0.0, EventKind::load_step, 42.0});
    CHECK(in.load_torque == 42.0);
    engine::apply_event(in, {0.0, EventKind::wind_step, 7.5});
    CHECK(*in.wind_override == 7.5);
    in.connected = false;
    engine::apply_event(in, {0.0, EventKind::connect, 0.0});
    CHECK(in.connected);

    auto s = bench::short_circuit_scenario();
    s.wind.kind = scenario::WindKind::step;
    s.wind.step_time = 0.05;
    s.wind.step_speed = 9.0;
    const auto ev = engine::effective_events(s);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].kind == EventKind::wind_step);
    CHECK(ev[1].kind == EventKind::short_circuit);
}

TEST_CASE("fault clearing recovers the operating point")
{
    auto s = bench::short_circuit_scenario();
    s.events.push_back({0.15, EventKind::restore_grid, 0.0});
    s.solver.t_end = 3.0;
    const auto ts = engine::integrate(s);
    const auto eq = engine::find_equilibrium(s);
    CHECK(ts.channel("s").back() == doctest::Approx(eq.state.slip).epsilon(1e-3));
    CHECK(ts.channel("MeG").back() == doctest::Approx(eq.generator_torque).epsilon(1e-2));
}

TEST_CASE("start from rest with the stator open, then connect")
{
    auto s = bench::short_circuit_scenario();
    s.events = {{0.2, EventKind::connect, 0.0}};
    s.grid.connected = false;
    s.solver.initial = scenario::InitialCondition::zero;
    s.solver.initial_slip = -0.01;
    s.solver.t_end = 0.4;
    const auto ts = engine::integrate(s);
    CHECK(ts.channel("MeG")[199] == 0.0);
    CHECK(ts.channel("Id")[199] == 0.0);
    // turbine torque alone accelerates the shaft before connection
    CHECK(ts.channel("omega_r")[199] > ts.channel("omega_r")[0]);
    CHECK(ts.channel("MeG").back() != 0.0);

    s.solver.initial = scenario::InitialCondition::equilibrium;
    CHECK_THROWS_AS(engine::integrate(s), ValidationError);
}

TEST_CASE("discrete torque balance converges at second order")
{
    const double e1 = max_central_difference_error(2e-4);
    const double e2 = max_central_difference_error(1e-4);
    const double e3 = max_central_difference_error(5e-5);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("runs are deterministic")
{
    const auto s = bench::short_circuit_scenario();
    CHECK(engine::integrate(s).to_csv() == engine::integrate(s).to_csv());
}

TEST_CASE("divergence reports channel and time")
{
    auto s = bench::short_circuit_scenario();
    s.events.clear();
    s.solver.initial = scenario::InitialCondition::zero;
    s.solver.initial_slip = -0.01;
    s.solver.dt = 0.01;
    s.solver.decimation = 1;
    s.solver.t_end = 50.0;
    try {
        engine::integrate(s);
        FAIL("expected divergence");
    } catch (const NumericalError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("t = ") != std::string::npos);
    }
}

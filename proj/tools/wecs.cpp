// wecs command-line front end. Talks to the library only through wecs.h.

#include "wecs.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

// Carries a library failure up to main with the right exit code.
struct Failure {
    int code;
    std::string message;
};

int exit_code(wecs_status s) { return s == WECS_ERR_NUMERICAL ? kExitNumerical : kExitConfig; }

void check(wecs_status s, const std::string& context = {})
{
    if (s == WECS_OK)
        return;
    std::string msg = wecs_last_error();
    if (!context.empty())
        msg = context + ": " + msg;
    throw Failure{exit_code(s), msg};
}

struct SeriesPtr {
    wecs_series* p = nullptr;
    SeriesPtr() = default;
    SeriesPtr(const SeriesPtr&) = delete;
    SeriesPtr& operator=(const SeriesPtr&) = delete;
    ~SeriesPtr() { wecs_series_free(p); }
};

struct ScenarioPtr {
    wecs_scenario* p = nullptr;
    ScenarioPtr() = default;
    ScenarioPtr(const ScenarioPtr&) = delete;
    ScenarioPtr& operator=(const ScenarioPtr&) = delete;
    ~ScenarioPtr() { wecs_scenario_free(p); }
};

struct OwnedText {
    char* p = nullptr;
    OwnedText() = default;
    OwnedText(const OwnedText&) = delete;
    OwnedText& operator=(const OwnedText&) = delete;
    ~OwnedText() { wecs_string_free(p); }
};

// Locale-independent shortest round-trip formatting.
std::string num(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream file{path, std::ios::binary};
    if (!file)
        throw Failure{kExitConfig, "cannot open '" + path.string() + "' for writing"};
    file << text;
}

struct FitOptions {
    double lambda0 = 7.0;
    double alpha = 2.25;
    double beta = 2.55;
    bool simplified = false;
};

void add_fit_options(CLI::App* cmd, FitOptions& o, bool lambda0_required)
{
    auto* opt = cmd->add_option("--lambda0", o.lambda0, "Optimal tip-speed ratio");
    if (lambda0_required)
        opt->required();
    cmd->add_option("--alpha", o.alpha, "Fit exponent alpha in [2, 2.5]");
    cmd->add_option("--beta", o.beta, "Fit exponent beta in [2.3, 2.8]");
    cmd->add_flag("--simplified", o.simplified, "Drop the start-torque term (C_M0 = 0)");
}

wecs_turbine_coefficients fit(const FitOptions& o)
{
    wecs_turbine_coefficients c{};
    check(wecs_fit_coefficients(o.lambda0, o.alpha, o.beta, o.simplified ? 1 : 0, &c), "fit");
    return c;
}

int run_fit(const FitOptions& o)
{
    const auto c = fit(o);
    std::printf("lambda0  %s\n", num(c.lambda0).c_str());
    std::printf("alpha    %s\n", num(c.alpha).c_str());
    std::printf("beta     %s\n", num(c.beta).c_str());
    std::printf("Cp_max   %.10g\n", c.cp_max);
    std::printf("C_M0     %.10g\n", c.cm0);
    std::printf("a        %.10g\n", c.a);
    std::printf("b        %.10g\n", c.b);
    return kExitOk;
}

int run_curve(const FitOptions& o, double lambda_max, int samples, const std::string& out)
{
    if (!(lambda_max > 0.0))
        throw Failure{kExitConfig, "--lambda-max must be > 0"};
    if (samples < 2)
        throw Failure{kExitConfig, "--samples must be >= 2"};
    const auto c = fit(o);
    std::string csv = "lambda,cp,cm\r\n";
    int negative = 0;
    double first_negative = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double lambda = lambda_max * i / (samples - 1);
        double cp = 0.0, cm = 0.0;
        check(wecs_cp(&c, lambda, &cp));
        check(wecs_cm(&c, lambda, &cm));
        if (cp < 0.0 && negative++ == 0)
            first_negative = lambda;
        csv += num(lambda) + "," + num(cp) + "," + num(cm) + "\r\n";
    }
    if (out.empty())
        std::fwrite(csv.data(), 1, csv.size(), stdout);
    else
        write_text(out, csv);
    if (negative > 0)
        std::fprintf(stderr, "curve: %d samples with cp < 0 (braking region) from lambda = %s\n", negative,
                     num(first_negative).c_str());
    if (!out.empty())
        std::printf("curve: %d samples written to %s\n", samples, out.c_str());
    return kExitOk;
}

struct SetpointOptions {
    std::string law;
    double un = 0.0;
    double fn = 0.0;
    double f = 0.0;
    std::optional<double> torque_ratio;
    std::optional<double> wind;
    double radius = 0.0;
    double lambda0 = 7.0;
};

int run_setpoint(const SetpointOptions& o)
{
    wecs_voltage_law law;
    if (o.law == "torque-ratio")
        law = WECS_LAW_TORQUE_RATIO;
    else if (o.law == "quadratic")
        law = WECS_LAW_QUADRATIC;
    else if (o.law == "linear")
        law = WECS_LAW_LINEAR;
    else
        throw Failure{kExitConfig, "--law must be torque-ratio, quadratic or linear"};
    double u = 0.0;
    check(wecs_preset_voltage(o.un, o.fn, o.f, law, o.torque_ratio ? 1 : 0, o.torque_ratio.value_or(0.0), &u),
          "setpoint");
    std::printf("U = %s V (law %s, f = %s Hz)\n", num(u).c_str(), o.law.c_str(), num(o.f).c_str());
    if (o.wind) {
        double w = 0.0;
        check(wecs_preset_speed(o.lambda0, o.radius, *o.wind, &w), "setpoint");
        std::printf("omega* = %s rad/s (lambda0 %s, v = %s m/s)\n", num(w).c_str(), num(o.lambda0).c_str(),
                    num(*o.wind).c_str());
    }
    return kExitOk;
}

struct InverterOptions {
    double vcc = 0.0;
    double fc = 3000.0;
    double f0 = 60.0;
    double ma = 0.9;
    double load_r = 0.0;
    double load_l = 0.0;
    std::string out;
    int periods = 20;
    int samples_per_period = 0;
};

int run_inverter(const InverterOptions& o)
{
    if (o.periods < 6)
        throw Failure{kExitConfig, "--periods must be >= 6"};
    if (!(o.f0 > 0.0) || !(o.fc > 0.0))
        throw Failure{kExitConfig, "--f0 and --fc must be > 0"};
    // Sample step dividing the fundamental period, at least 100 per carrier cycle.
    const int spp = o.samples_per_period > 0 ? o.samples_per_period
                                             : static_cast<int>(std::ceil(100.0 * o.fc / o.f0));
    const double dt = 1.0 / (o.f0 * spp);
    const wecs_pwm_config cfg{o.fc, o.f0, o.ma};
    SeriesPtr series;
    check(wecs_inverter_simulate(o.vcc, &cfg, o.load_r, o.load_l, o.periods / o.f0, dt, &series.p), "inverter-demo");
    check(wecs_series_write_csv(series.p, o.out.c_str()));

    // Last five periods: the RL transient has long settled.
    const double* ia = nullptr;
    check(wecs_series_channel(series.p, "ia", &ia));
    const std::size_t window = static_cast<std::size_t>(5) * spp;
    const std::size_t rows = wecs_series_rows(series.p);
    double thd = 0.0, a1 = 0.0;
    check(wecs_thd(ia + rows - window, window, dt, o.f0, 50, &thd), "thd");
    check(wecs_harmonic_amplitude(ia + rows - window, window, dt, o.f0, 1, &a1), "thd");
    std::printf("inverter-demo: %zu samples to %s, ia fundamental %s A, THD(ia) %.4f %%\n", rows, o.out.c_str(),
                num(a1).c_str(), thd);
    return kExitOk;
}

struct ThdOptions {
    std::string input;
    std::string column;
    double f0 = 0.0;
    int max_harmonic = 50;
    int periods = 0;
};

int run_thd(const ThdOptions& o)
{
    SeriesPtr series;
    check(wecs_series_read_csv(o.input.c_str(), &series.p), o.input);
    const double* data = nullptr;
    check(wecs_series_channel(series.p, o.column.c_str(), &data), o.input);
    const std::size_t rows = wecs_series_rows(series.p);
    if (rows < 2)
        throw Failure{kExitConfig, o.input + ": need at least two samples"};
    const double* t = wecs_series_time(series.p);
    const double dt = (t[rows - 1] - t[0]) / static_cast<double>(rows - 1);
    std::size_t begin = 0;
    if (o.periods > 0) {
        const double count = o.periods / (o.f0 * dt);
        const auto n = static_cast<std::size_t>(std::llround(count));
        if (std::abs(count - static_cast<double>(n)) > 1e-6 * count || n > rows)
            throw Failure{kExitConfig, "--periods: " + std::to_string(o.periods) +
                                           " periods do not map onto whole samples of the series"};
        begin = rows - n;
    }
    double value = 0.0;
    check(wecs_thd(data + begin, rows - begin, dt, o.f0, o.max_harmonic, &value), o.input);
    std::printf("THD(%s) = %.6f %% over %zu samples (f0 = %s Hz, harmonics <= %d)\n", o.column.c_str(), value,
                rows - begin, num(o.f0).c_str(), o.max_harmonic);
    return kExitOk;
}

std::string load_error_context(const std::string& path) { return "scenario '" + path + "'"; }

int run_equilibrium(const std::string& path)
{
    ScenarioPtr sc;
    check(wecs_scenario_load(path.c_str(), &sc.p), load_error_context(path));
    wecs_operating_point op{};
    check(wecs_find_equilibrium(sc.p, &op), load_error_context(path));
    std::printf("slip     %.12g\n", op.slip);
    std::printf("omega_r  %.12g rad/s\n", op.omega_r);
    std::printf("Id       %.12g A\n", op.i_d);
    std::printf("Iq       %.12g A\n", op.i_q);
    std::printf("Idr      %.12g A\n", op.i_dr);
    std::printf("Iqr      %.12g A\n", op.i_qr);
    std::printf("MuT      %.12g N*m\n", op.turbine_torque);
    std::printf("MeG      %.12g N*m\n", op.generator_torque);
    std::printf("residual %.3g\n", op.residual);
    return kExitOk;
}

struct SimulateOptions {
    std::vector<std::string> scenarios;
    std::string out = ".";
    std::string dump_config;
    int jobs = 1;
};

int run_simulate(const SimulateOptions& o)
{
    if (!o.dump_config.empty()) {
        if (o.scenarios.size() != 1)
            throw Failure{kExitConfig, "--dump-config takes exactly one --scenario"};
        ScenarioPtr sc;
        check(wecs_scenario_load(o.scenarios[0].c_str(), &sc.p), load_error_context(o.scenarios[0]));
        OwnedText text;
        check(wecs_scenario_dump(sc.p, &text.p));
        if (o.dump_config == "-")
            std::fputs(text.p, stdout);
        else
            write_text(o.dump_config, text.p);
        return kExitOk;
    }

    std::error_code ec;
    fs::create_directories(o.out, ec);
    if (ec || !fs::is_directory(o.out))
        throw Failure{kExitConfig, "--out: cannot create directory '" + o.out + "'"};

    std::vector<std::optional<Failure>> failures(o.scenarios.size());
    std::vector<std::string> summaries(o.scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < o.scenarios.size(); i = next++) {
            const std::string& path = o.scenarios[i];
            try {
                ScenarioPtr sc;
                check(wecs_scenario_load(path.c_str(), &sc.p), load_error_context(path));
                SeriesPtr series;
                check(wecs_simulate(sc.p, &series.p), load_error_context(path));
                const fs::path target = fs::path{o.out} / (fs::path{path}.stem().string() + ".csv");
                check(wecs_series_write_csv(series.p, target.string().c_str()));
                summaries[i] = "simulate: " + path + " -> " + target.string() + " (" +
                               std::to_string(wecs_series_rows(series.p)) + " rows)";
            } catch (const Failure& f) {
                failures[i] = f;
            }
        }
    };
    const int jobs = std::clamp(o.jobs, 1, 64);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    int code = kExitOk;
    for (std::size_t i = 0; i < o.scenarios.size(); ++i) {
        if (failures[i]) {
            std::fprintf(stderr, "wecs: %s\n", failures[i]->message.c_str());
            code = std::max(code, failures[i]->code);
        } else {
            std::printf("%s\n", summaries[i].c_str());
        }
    }
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"wecs: wind energy conversion system simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string{wecs_version()});

    FitOptions fit_opts;
    auto* fit_cmd = app.add_subcommand("fit", "Fit the Cp/Cm coefficient set for a given lambda0");
    add_fit_options(fit_cmd, fit_opts, true);

    FitOptions curve_fit;
    double lambda_max = 0.0;
    int samples = 0;
    std::string curve_out;
    auto* curve_cmd = app.add_subcommand("curve", "Emit lambda,cp,cm CSV");
    curve_cmd->add_option("--lambda-max", lambda_max, "Largest tip-speed ratio")->required();
    curve_cmd->add_option("--samples", samples, "Number of samples")->required();
    curve_cmd->add_option("--out", curve_out, "Output file (default stdout)");
    add_fit_options(curve_cmd, curve_fit, false);

    SetpointOptions sp;
    double torque_ratio = 0.0, wind = 0.0;
    auto* sp_cmd = app.add_subcommand("setpoint", "Preset voltage (and optionally rotor speed)");
    sp_cmd->add_option("--law", sp.law, "torque-ratio | quadratic | linear")->required();
    sp_cmd->add_option("--un", sp.un, "Rated voltage [V]")->required();
    sp_cmd->add_option("--fn", sp.fn, "Rated frequency [Hz]")->required();
    sp_cmd->add_option("--f", sp.f, "Supply frequency [Hz]")->required();
    auto* tr_opt = sp_cmd->add_option("--torque-ratio", torque_ratio, "M/M_N for the torque-ratio law");
    auto* wind_opt = sp_cmd->add_option("--wind", wind, "Wind speed [m/s] for the rotor speed reference");
    sp_cmd->add_option("--radius", sp.radius, "Turbine radius [m]");
    sp_cmd->add_option("--lambda0", sp.lambda0, "Optimal tip-speed ratio");

    InverterOptions inv;
    auto* inv_cmd = app.add_subcommand("inverter-demo", "PWM inverter driving an RL load");
    inv_cmd->add_option("--vcc", inv.vcc, "DC link voltage [V]")->required();
    inv_cmd->add_option("--fc", inv.fc, "Carrier frequency [Hz]")->required();
    inv_cmd->add_option("--f0", inv.f0, "Reference frequency [Hz]")->required();
    inv_cmd->add_option("--ma", inv.ma, "Modulation index")->required();
    inv_cmd->add_option("--load-r", inv.load_r, "Load resistance [ohm]")->required();
    inv_cmd->add_option("--load-l", inv.load_l, "Load inductance [H]")->required();
    inv_cmd->add_option("--out", inv.out, "Output CSV")->required();
    inv_cmd->add_option("--periods", inv.periods, "Fundamental periods to simulate");
    inv_cmd->add_option("--samples-per-period", inv.samples_per_period, "Samples per fundamental period");

    ThdOptions thd;
    auto* thd_cmd = app.add_subcommand("thd", "Total harmonic distortion of a CSV column");
    thd_cmd->add_option("--input", thd.input, "CSV file with a leading t column")->required();
    thd_cmd->add_option("--column", thd.column, "Column name")->required();
    thd_cmd->add_option("--f0", thd.f0, "Fundamental frequency [Hz]")->required();
    thd_cmd->add_option("--max-harmonic", thd.max_harmonic, "Highest harmonic (<= 0: up to Nyquist)");
    thd_cmd->add_option("--periods", thd.periods, "Analyze only the last N fundamental periods");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run scenario files");
    sim_cmd->add_option("--scenario", sim.scenarios, "Scenario TOML (repeatable)")->required();
    sim_cmd->add_option("--out", sim.out, "Output directory");
    sim_cmd->add_option("--dump-config", sim.dump_config, "Write the canonical scenario TOML ('-' = stdout) and exit");
    sim_cmd->add_option("--jobs", sim.jobs, "Scenarios to run concurrently");

    std::string eq_path;
    auto* eq_cmd = app.add_subcommand("equilibrium", "Print the settled operating point of a scenario");
    eq_cmd->add_option("--scenario", eq_path, "Scenario TOML")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*fit_cmd)
            return run_fit(fit_opts);
        if (*curve_cmd)
            return run_curve(curve_fit, lambda_max, samples, curve_out);
        if (*sp_cmd) {
            if (*tr_opt)
                sp.torque_ratio = torque_ratio;
            if (*wind_opt)
                sp.wind = wind;
            return run_setpoint(sp);
        }
        if (*inv_cmd)
            return run_inverter(inv);
        if (*thd_cmd)
            return run_thd(thd);
        if (*sim_cmd)
            return run_simulate(sim);
        if (*eq_cmd)
            return run_equilibrium(eq_path);
    } catch (const Failure& f) {
        std::fprintf(stderr, "wecs: %s\n", f.message.c_str());
        return f.code;
    }
    return kExitConfig;
}

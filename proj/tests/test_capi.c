/* Exercises the shared library through its C header only. */
#include "wecs.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                        \
    do {                                                                    \
        if (!(cond)) {                                                      \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                     \
        }                                                                   \
    } while (0)

static int close_rel(double x, double ref, double tol) { return fabs(x - ref) <= tol * fabs(ref); }

static void test_turbine(void)
{
    wecs_turbine_coefficients c;
    EXPECT(wecs_fit_coefficients(7.0, 2.0, 2.5, 0, &c) == WECS_OK);
    EXPECT(close_rel(c.a, 0.051740158991195638, 1e-12));
    EXPECT(close_rel(c.b, 0.015732908520344228, 1e-12));
    double cp = 0.0;
    EXPECT(wecs_cp(&c, 7.0, &cp) == WECS_OK);
    EXPECT(close_rel(cp, c.cp_max, 1e-13));

    wecs_turbine_geometry g = {5.0, 0.0};
    double p = 0.0, m = 0.0;
    EXPECT(wecs_turbine_power(&g, 1.225, &c, 10.0, 14.0, &p) == WECS_OK);
    EXPECT(wecs_turbine_torque(&g, 1.225, &c, 10.0, 14.0, &m) == WECS_OK);
    EXPECT(close_rel(p, m * 14.0, 1e-14));

    EXPECT(wecs_fit_coefficients(-1.0, 2.0, 2.5, 0, &c) == WECS_ERR_INVALID_ARGUMENT);
    EXPECT(strstr(wecs_last_error(), "lambda0") != NULL);
    EXPECT(wecs_fit_coefficients(7.0, 2.0, 2.5, 0, NULL) == WECS_ERR_INVALID_ARGUMENT);
}

static void test_setpoint(void)
{
    double u = 0.0;
    EXPECT(wecs_preset_voltage(400.0, 50.0, 25.0, WECS_LAW_QUADRATIC, 0, 0.0, &u) == WECS_OK);
    EXPECT(fabs(u - 100.0) < 1e-12);
    EXPECT(wecs_preset_voltage(400.0, 50.0, 25.0, WECS_LAW_LINEAR, 0, 0.0, &u) == WECS_OK);
    EXPECT(fabs(u - 200.0) < 1e-12);
    EXPECT(wecs_preset_voltage(400.0, 50.0, 25.0, WECS_LAW_TORQUE_RATIO, 0, 0.0, &u) == WECS_ERR_INVALID_ARGUMENT);
    EXPECT(wecs_preset_speed(7.0, 5.0, 10.0, &u) == WECS_OK);
    EXPECT(fabs(u - 14.0) < 1e-12);
}

static void test_converter(void)
{
    double v[3];
    EXPECT(wecs_phase_voltages(600.0, 1, 1, 1, WECS_INVERTER_UNCORRECTED, v) == WECS_OK);
    EXPECT(fabs(v[2] + 600.0) < 1e-12);
    EXPECT(wecs_phase_voltages(600.0, 1, 0, 0, WECS_INVERTER_CORRECTED, v) == WECS_OK);
    EXPECT(v[0] + v[1] + v[2] == 0.0);
    EXPECT(wecs_phase_voltages(600.0, 2, 0, 0, WECS_INVERTER_CORRECTED, v) == WECS_ERR_INVALID_ARGUMENT);

    wecs_pwm_config cfg = {3000.0, 60.0, 0.9};
    int s[3];
    EXPECT(wecs_pwm_switch_states(&cfg, 0.001, s) == WECS_OK);

    wecs_series* ts = NULL;
    const double dt = 1.0 / 120000.0;
    EXPECT(wecs_inverter_simulate(600.0, &cfg, 10.0, 0.01, 10.0 / 60.0, dt, &ts) == WECS_OK);
    EXPECT(wecs_series_rows(ts) == 20001);
    EXPECT(wecs_series_channels(ts) == 6);
    EXPECT(strcmp(wecs_series_channel_name(ts, 3), "ia") == 0);
    EXPECT(wecs_series_channel_name(ts, 6) == NULL);
    const double* ia = NULL;
    EXPECT(wecs_series_channel(ts, "ia", &ia) == WECS_OK);
    double thd = 0.0, a1 = 0.0;
    EXPECT(wecs_thd(ia + 10001, 10000, dt, 60.0, 50, &thd) == WECS_OK);
    EXPECT(thd > 0.0 && thd < 20.0);
    EXPECT(wecs_harmonic_amplitude(ia + 10001, 10000, dt, 60.0, 1, &a1) == WECS_OK);
    EXPECT(close_rel(a1, 270.0 / hypot(10.0, 2.0 * 3.14159265358979 * 0.6), 0.03));
    EXPECT(wecs_series_channel(ts, "nope", &ia) == WECS_ERR_INVALID_ARGUMENT);
    EXPECT(wecs_thd(ia, 0, dt, 60.0, 50, &thd) != WECS_OK);
    wecs_series_free(ts);
}

static void test_scenario(const char* path)
{
    wecs_scenario* sc = NULL;
    EXPECT(wecs_scenario_load(path, &sc) == WECS_OK);
    if (!sc)
        return;
    EXPECT(strcmp(wecs_scenario_name(sc), "shortcircuit") == 0);

    char* text = NULL;
    EXPECT(wecs_scenario_dump(sc, &text) == WECS_OK);
    wecs_scenario* back = NULL;
    EXPECT(wecs_scenario_parse(text, &back) == WECS_OK);
    EXPECT(wecs_scenario_equal(sc, back));
    wecs_string_free(text);
    wecs_scenario_free(back);

    wecs_operating_point op;
    EXPECT(wecs_find_equilibrium(sc, &op) == WECS_OK);
    EXPECT(op.residual < 1e-8);
    EXPECT(close_rel(op.turbine_torque, 11.4 * op.generator_torque, 1e-9));

    wecs_series* a = NULL;
    wecs_series* b = NULL;
    EXPECT(wecs_simulate(sc, &a) == WECS_OK);
    EXPECT(wecs_simulate(sc, &b) == WECS_OK);
    char* ca = NULL;
    char* cb = NULL;
    EXPECT(wecs_series_to_csv(a, &ca) == WECS_OK);
    EXPECT(wecs_series_to_csv(b, &cb) == WECS_OK);
    EXPECT(ca && cb && strcmp(ca, cb) == 0);
    EXPECT(ca && strncmp(ca, "t,Id,Iq,Idr,Iqr,s,omega_r,MuT,MeG,v,Ud\r\n", 40) == 0);
    EXPECT(wecs_series_rows(a) == 601);
    EXPECT(fabs(wecs_series_time(a)[600] - 0.6) < 1e-12);

    EXPECT(wecs_series_write_csv(a, "capi_roundtrip.csv") == WECS_OK);
    wecs_series* r = NULL;
    EXPECT(wecs_series_read_csv("capi_roundtrip.csv", &r) == WECS_OK);
    char* cr = NULL;
    EXPECT(wecs_series_to_csv(r, &cr) == WECS_OK);
    EXPECT(ca && cr && strcmp(ca, cr) == 0);
    remove("capi_roundtrip.csv");

    wecs_string_free(ca);
    wecs_string_free(cb);
    wecs_string_free(cr);
    wecs_series_free(a);
    wecs_series_free(b);
    wecs_series_free(r);
    wecs_scenario_free(sc);

    EXPECT(wecs_scenario_load("/nonexistent/none.toml", &sc) == WECS_ERR_INVALID_ARGUMENT);
    EXPECT(strstr(wecs_last_error(), "/nonexistent/none.toml") != NULL);
    EXPECT(wecs_scenario_parse("[turbine]\nradius = 1.0\n", &sc) == WECS_ERR_INVALID_ARGUMENT);
    EXPECT(strstr(wecs_last_error(), "generator") != NULL);
    EXPECT(wecs_simulate(NULL, &a) == WECS_ERR_INVALID_ARGUMENT);
}

static void test_misc(void)
{
    EXPECT(strlen(wecs_version()) > 0);
    EXPECT(strcmp(wecs_status_string(WECS_OK), wecs_status_string(WECS_ERR_NUMERICAL)) != 0);
    wecs_series_free(NULL);
    wecs_scenario_free(NULL);
    wecs_string_free(NULL);
}

int main(int argc, char** argv)
{
    if (argc < 2) {
        fprintf(stderr, "usage: test_capi <scenario.toml>\n");
        return 2;
    }
    test_turbine();
    test_setpoint();
    test_converter();
    test_scenario(argv[1]);
    test_misc();
    if (failures)
        fprintf(stderr, "%d failure(s)\n", failures);
    else
        printf("all C API checks passed\n");
    return failures ? 1 : 0;
}

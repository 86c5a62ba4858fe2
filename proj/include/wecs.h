/*
 * wecs: wind energy conversion system simulator, C interface.
 *
 * Every function returns a wecs_status. On failure the thread-local message
 * from wecs_last_error() describes what went wrong; it stays valid until the
 * next failing call on the same thread. Objects returned through `out`
 * pointers are owned by the caller and released with the matching *_free.
 */
#ifndef WECS_H
#define WECS_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(WECS_BUILDING_LIBRARY)
#    define WECS_API __declspec(dllexport)
#  else
#    define WECS_API __declspec(dllimport)
#  endif
#else
#  define WECS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wecs_status {
    WECS_OK = 0,
    WECS_ERR_INVALID_ARGUMENT = 1, /* bad parameter, config key or file */
    WECS_ERR_NUMERICAL = 2,        /* non-finite state, no equilibrium */
    WECS_ERR_INTERNAL = 3
} wecs_status;

WECS_API const char* wecs_last_error(void);
WECS_API const char* wecs_status_string(wecs_status status);
WECS_API const char* wecs_version(void);

/* ---- turbine ---------------------------------------------------------- */

typedef struct wecs_turbine_coefficients {
    double lambda0;
    double cm0;
    double a;
    double b;
    double alpha;
    double beta;
    double cp_max;
} wecs_turbine_coefficients;

typedef struct wecs_turbine_geometry {
    double radius;     /* R_T [m] */
    double swept_area; /* S_T [m^2]; <= 0 selects pi*R_T^2 */
} wecs_turbine_geometry;

WECS_API wecs_status wecs_fit_coefficients(double lambda0, double alpha, double beta, int simplified,
                                           wecs_turbine_coefficients* out);
WECS_API wecs_status wecs_cp(const wecs_turbine_coefficients* c, double lambda, double* out);
WECS_API wecs_status wecs_cm(const wecs_turbine_coefficients* c, double lambda, double* out);
WECS_API wecs_status wecs_turbine_power(const wecs_turbine_geometry* geometry, double rho,
                                        const wecs_turbine_coefficients* c, double wind_speed, double omega,
                                        double* out);
WECS_API wecs_status wecs_turbine_torque(const wecs_turbine_geometry* geometry, double rho,
                                         const wecs_turbine_coefficients* c, double wind_speed, double omega,
                                         double* out);

/* ---- setpoints -------------------------------------------------------- */

typedef enum wecs_voltage_law {
    WECS_LAW_TORQUE_RATIO = 0,
    WECS_LAW_QUADRATIC = 1,
    WECS_LAW_LINEAR = 2
} wecs_voltage_law;

WECS_API wecs_status wecs_preset_speed(double lambda0, double radius, double wind_speed, double* out);
/* has_torque_ratio = 0 means "not supplied". */
WECS_API wecs_status wecs_preset_voltage(double u_n, double f_n, double f, wecs_voltage_law law,
                                         int has_torque_ratio, double torque_ratio, double* out);

/* ---- time series ------------------------------------------------------ */

typedef struct wecs_series wecs_series;

WECS_API void wecs_series_free(wecs_series* series);
WECS_API size_t wecs_series_rows(const wecs_series* series);
WECS_API size_t wecs_series_channels(const wecs_series* series);
/* Name of channel i (0-based, excluding "t"); NULL when out of range. */
WECS_API const char* wecs_series_channel_name(const wecs_series* series, size_t index);
WECS_API const double* wecs_series_time(const wecs_series* series);
WECS_API wecs_status wecs_series_channel(const wecs_series* series, const char* name, const double** data);
WECS_API wecs_status wecs_series_read_csv(const char* path, wecs_series** out);
WECS_API wecs_status wecs_series_write_csv(const wecs_series* series, const char* path);
/* CSV text; release with wecs_string_free. */
WECS_API wecs_status wecs_series_to_csv(const wecs_series* series, char** out);
WECS_API void wecs_string_free(char* text);

/* ---- converter -------------------------------------------------------- */

typedef enum wecs_inverter_variant {
    WECS_INVERTER_CORRECTED = 0,
    WECS_INVERTER_UNCORRECTED = 1
} wecs_inverter_variant;

typedef struct wecs_pwm_config {
    double f_carrier; /* [Hz] */
    double f_ref;     /* [Hz] */
    double m_a;       /* amplitude modulation index */
} wecs_pwm_config;

/* Switch commands must be 0 or 1. out receives u_a, u_b, u_c. */
WECS_API wecs_status wecs_phase_voltages(double v_cc, int s_a, int s_b, int s_c, wecs_inverter_variant variant,
                                         double out[3]);
WECS_API wecs_status wecs_pwm_switch_states(const wecs_pwm_config* cfg, double t, int out[3]);
/* Channels ua, ub, uc, ia, ib, ic. */
WECS_API wecs_status wecs_inverter_simulate(double v_cc, const wecs_pwm_config* cfg, double load_r, double load_l,
                                            double duration, double dt, wecs_series** out);
/* max_harmonic <= 0 selects every harmonic below Nyquist. */
WECS_API wecs_status wecs_thd(const double* samples, size_t count, double dt, double f0, int max_harmonic,
                              double* out);
/* Amplitude of harmonic h (1 = fundamental). */
WECS_API wecs_status wecs_harmonic_amplitude(const double* samples, size_t count, double dt, double f0, int h,
                                             double* out);

/* ---- scenarios -------------------------------------------------------- */

typedef struct wecs_scenario wecs_scenario;

typedef struct wecs_operating_point {
    double i_d, i_q, i_dr, i_qr; /* [A] */
    double slip;
    double omega_r;          /* turbine speed [rad/s] */
    double turbine_torque;   /* M_uT [N*m] */
    double generator_torque; /* M_eG [N*m] */
    double residual;         /* largest scaled derivative */
} wecs_operating_point;

WECS_API wecs_status wecs_scenario_load(const char* path, wecs_scenario** out);
WECS_API wecs_status wecs_scenario_parse(const char* toml_text, wecs_scenario** out);
WECS_API void wecs_scenario_free(wecs_scenario* scenario);
/* Canonical TOML that re-parses to an identical scenario. */
WECS_API wecs_status wecs_scenario_dump(const wecs_scenario* scenario, char** out);
WECS_API int wecs_scenario_equal(const wecs_scenario* a, const wecs_scenario* b);
WECS_API const char* wecs_scenario_name(const wecs_scenario* scenario);

WECS_API wecs_status wecs_simulate(const wecs_scenario* scenario, wecs_series** out);
WECS_API wecs_status wecs_find_equilibrium(const wecs_scenario* scenario, wecs_operating_point* out);

#ifdef __cplusplus
}
#endif

#endif /* WECS_H */

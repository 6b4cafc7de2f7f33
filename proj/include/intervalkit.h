/* intervalkit C API: numerical analysis of piecewise C^1 interval maps.
 *
 * All objects are opaque handles; every fallible call returns an ik_status
 * and writes results through out-parameters. ik_last_error() returns a
 * thread-local message for the most recent failing call on this thread.
 * Strings returned by ik_result_* stay valid until the result is freed;
 * strings returned through char** out-parameters are released with
 * ik_string_free().
 */
#ifndef INTERVALKIT_H
#define INTERVALKIT_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  ifdef INTERVALKIT_BUILD
#    define IK_API __declspec(dllexport)
#  else
#    define IK_API __declspec(dllimport)
#  endif
#else
#  define IK_API __attribute__((visibility("default")))
#endif

typedef enum ik_status {
  IK_OK = 0,
  IK_ERR_INVALID_ARGUMENT = 1,
  IK_ERR_OUT_OF_DOMAIN = 2,
  IK_ERR_SIDE_REQUIRED = 3,
  IK_ERR_UNDEFINED_DERIVATIVE = 4,
  IK_ERR_SINGULAR_DERIVATIVE = 5,
  IK_ERR_UNKNOWN_FAMILY = 6,
  IK_ERR_INVALID_PARAMS = 7,
  IK_ERR_DEGENERATE_FIT = 8,
  IK_ERR_NO_CONVERGENCE = 9,
  IK_ERR_CONFIG = 10,
  IK_ERR_EXECUTION = 11
} ik_status;

typedef enum ik_side {
  IK_SIDE_LEFT = -1,
  IK_SIDE_INTERIOR = 0,
  IK_SIDE_RIGHT = 1
} ik_side;

typedef struct ik_map ik_map;
typedef struct ik_result ik_result;

IK_API const char *ik_version(void);
IK_API const char *ik_status_name(ik_status status);
IK_API const char *ik_last_error(void);

/* Maps ------------------------------------------------------------------ */

/* family: builtin family name (doubling, tent, logistic, asymmetric_unimodal,
 * lorenz_affine, lorenz_power, gap_affine). params: comma-separated
 * "key=value" numeric pairs, NULL or "" for family defaults. */
IK_API ik_status ik_map_create(const char *family, const char *params,
                               ik_map **out);
IK_API void ik_map_free(ik_map *map);

IK_API ik_status ik_map_eval(const ik_map *map, double x, ik_side side,
                             double *out);
IK_API ik_status ik_map_deriv(const ik_map *map, double x, int order,
                              ik_side side, double *out);
IK_API ik_status ik_map_schwarzian(const ik_map *map, double x, double *out);
IK_API int ik_map_branch_count(const ik_map *map);
IK_API int ik_map_critical_count(const ik_map *map);

/* JSON description of the map (branch domains, orientations, one-sided
 * values, critical set with orders); free with ik_string_free. */
IK_API ik_status ik_map_describe(const ik_map *map, char **json_out);
IK_API void ik_string_free(char *s);

/* Experiments ------------------------------------------------------------ */

/* Runs the analysis named by an experiment config (plain-text key-value
 * format with [map]/[analysis]/[output] sections). seed_override, when
 * non-NULL, replaces the config's seed. Verdicts are data: a run that
 * concludes "diverges" still returns IK_OK. */
IK_API ik_status ik_run(const char *config_text,
                        const unsigned long long *seed_override,
                        ik_result **out);

IK_API const char *ik_result_analysis(const ik_result *result);
IK_API const char *ik_result_verdict(const ik_result *result);
IK_API const char *ik_result_summary(const ik_result *result);
IK_API const char *ik_result_json(const ik_result *result);
IK_API const char *ik_result_output_dir(const ik_result *result);
IK_API const char *ik_result_formats(const ik_result *result);
IK_API int ik_result_csv_count(const ik_result *result);
IK_API const char *ik_result_csv_name(const ik_result *result, int index);
IK_API const char *ik_result_csv_data(const ik_result *result, int index);
IK_API void ik_result_free(ik_result *result);

#ifdef __cplusplus
}
#endif

#endif /* INTERVALKIT_H */

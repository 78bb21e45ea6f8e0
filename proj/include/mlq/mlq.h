/* C interface to the minimal Lagrangian surface library. */
#ifndef MLQ_H
#define MLQ_H

#include <stddef.h>

#if defined(_WIN32)
#define MLQ_API __declspec(dllexport)
#else
#define MLQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlq_status {
    MLQ_OK = 0,
    MLQ_ERR_INVALID_INPUT = 1,
    MLQ_ERR_SIZE_MISMATCH,
    MLQ_ERR_SINGULAR_SAMPLE,
    MLQ_ERR_OUTSIDE_BIG_CELL,
    MLQ_ERR_OVERFLOW,
    MLQ_ERR_NOT_ON_HYPERBOLOID,
    MLQ_ERR_WRONG_SHEET,
    MLQ_ERR_STEP_UNDERFLOW,
    MLQ_ERR_OUT_OF_INTERVAL,
    MLQ_ERR_BRANCH_CUT,
    MLQ_ERR_NO_CONVERGENCE,
    MLQ_ERR_DEGENERATE_DISCRIMINANT,
    MLQ_ERR_FRAME_HOLE,
    MLQ_ERR_NOT_HORIZONTAL,
    MLQ_ERR_DOMAIN,
    MLQ_ERR_DEGENERATE_FRAME,
    MLQ_ERR_GRID_TOO_COARSE,
    MLQ_ERR_DEGENERATE_LAMBDA0,
    MLQ_ERR_ZERO_B,
    MLQ_ERR_NOT_ELLIPTIC,
    MLQ_ERR_CONFIG,
    MLQ_ERR_IO,
    MLQ_ERR_INTERNAL = 99
} mlq_status;

typedef enum mlq_monodromy_class { MLQ_PLUS_ID = 0, MLQ_MINUS_ID = 1, MLQ_NONTRIVIAL = 2 } mlq_monodromy_class;

typedef struct mlq_config mlq_config;
typedef struct mlq_closing mlq_closing;

MLQ_API const char* mlq_version(void);
MLQ_API const char* mlq_status_name(mlq_status s);
/* message of the last failed call on this thread; "" if none */
MLQ_API const char* mlq_last_error(void);
/* every char** returned by the library is released with this */
MLQ_API void mlq_string_free(char* s);

/* run configuration */
MLQ_API mlq_status mlq_config_parse(const char* json, mlq_config** out);
MLQ_API void mlq_config_free(mlq_config* cfg);
MLQ_API mlq_status mlq_config_set_steps(mlq_config* cfg, int steps_x, int steps_y);
MLQ_API mlq_status mlq_config_set_lambdas(mlq_config* cfg, const double* angles, size_t count);
MLQ_API mlq_status mlq_config_set_negative_control(mlq_config* cfg, int enabled);
/* key: mesh_csv, mesh_json, profile_svg, report_json, holes_json */
MLQ_API mlq_status mlq_config_set_output(mlq_config* cfg, const char* key, const char* path);
MLQ_API mlq_status mlq_config_get_output(const mlq_config* cfg, const char* key, char** path);

/* holes_json is NULL when the grid is complete */
MLQ_API mlq_status mlq_build(const mlq_config* cfg, char** mesh_csv, char** mesh_json, char** holes_json,
                             size_t* rows, size_t* holes);
MLQ_API mlq_status mlq_verify(const mlq_config* cfg, char** report_json, int* pass);
MLQ_API mlq_status mlq_associate(const mlq_config* cfg, char** json, int* pass);

/* closing conditions for the equivariant family */
MLQ_API mlq_status mlq_closing_solve(int m, int n, double lambda0_arg, double a, int sign_c, mlq_closing** out);
MLQ_API void mlq_closing_free(mlq_closing* p);
MLQ_API mlq_status mlq_closing_params(const mlq_closing* p, double* b, double* c, double* residual_m,
                                      double* residual_n);
MLQ_API mlq_status mlq_closing_interval(const mlq_closing* p, double* lo, double* hi);
/* which = 0 evaluates at lambda0, which = 1 at i*lambda0 */
MLQ_API mlq_status mlq_closing_monodromy(const mlq_closing* p, int which, int* cls, double* residual);
MLQ_API mlq_status mlq_closing_mu(const mlq_closing* p, int which, double* mu);
MLQ_API mlq_status mlq_closing_metric(const mlq_closing* p, double x, double* metric);
MLQ_API mlq_status mlq_closing_profile(const mlq_closing* p, int x_samples, double y, char** csv, char** svg);
MLQ_API mlq_status mlq_closing_rotation_residual(const mlq_closing* p, int x_samples, double y, double theta,
                                                 double* r1, double* r2);
MLQ_API mlq_status mlq_closing_ends(const mlq_closing* p, double* left_slope, double* right_slope, int* consistent);
/* relative distances |f(z+2 pi i) -/+ f(z)| at z */
MLQ_API mlq_status mlq_closing_period(const mlq_closing* p, double x, double y, double* plus, double* minus);

#ifdef __cplusplus
}
#endif

#endif

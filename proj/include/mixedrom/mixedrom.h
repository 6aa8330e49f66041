/* C interface of the mixedrom library. Every function returns an mrom_status;
 * on failure mrom_last_error() holds a stage-tagged message for the calling
 * thread. Handles are opaque and owned by the caller. */
#ifndef MIXEDROM_H
#define MIXEDROM_H

#include <stddef.h>

#if defined(MROM_BUILDING_LIBRARY)
#define MROM_API __attribute__((visibility("default")))
#else
#define MROM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mrom_status {
  MROM_OK = 0,
  MROM_ERR_CONFIG = 1,
  MROM_ERR_IO = 2,
  MROM_ERR_GRID = 3,
  MROM_ERR_FOM = 4,
  MROM_ERR_POD = 5,
  MROM_ERR_GALERKIN = 6,
  MROM_ERR_RBF = 7,
  MROM_ERR_SOLVER = 8,
  MROM_ERR_POSTPROC = 9,
  MROM_ERR_ARGUMENT = 10,
  MROM_ERR_INTERNAL = 11
} mrom_status;

typedef struct mrom_config mrom_config;
typedef struct mrom_model mrom_model;
typedef struct mrom_result mrom_result;

/* Receives progress text one line at a time (without the newline). */
typedef void (*mrom_log_fn)(const char* line, void* user);

MROM_API const char* mrom_version(void);
MROM_API const char* mrom_last_error(void);
MROM_API const char* mrom_status_name(mrom_status status);

MROM_API mrom_status mrom_config_create(mrom_config** out);
/* Reads key = value lines; '#' starts a comment. */
MROM_API mrom_status mrom_config_load(const char* path, mrom_config** out);
/* "key=value"; later assignments override earlier ones. */
MROM_API mrom_status mrom_config_set(mrom_config* config, const char* assignment);
MROM_API void mrom_config_destroy(mrom_config* config);

MROM_API mrom_status mrom_generate(const mrom_config* config, mrom_log_fn log, void* user);
MROM_API mrom_status mrom_offline(const mrom_config* config, mrom_log_fn log, void* user);
MROM_API mrom_status mrom_online(const mrom_config* config, mrom_log_fn log, void* user, mrom_result** out);

/* Writes up to `capacity` rows; *count receives the number of rows available. */
MROM_API mrom_status mrom_sweep_tau(const mrom_config* config, mrom_log_fn log, void* user, double* tau,
                                    double* inlet_mismatch, size_t capacity, size_t* count);
MROM_API mrom_status mrom_sweep_modes(const mrom_config* config, mrom_log_fn log, void* user, int* modes,
                                      double* mean_eps_u, double* mean_eps_p, size_t capacity, size_t* count);

MROM_API mrom_status mrom_model_load(const char* dir, mrom_model** out);
/* Stored maximum counts: POD velocity, supremizer, pressure and viscosity modes. */
MROM_API mrom_status mrom_model_ranks(const mrom_model* model, int* n_u, int* n_s, int* n_p, int* n_nut);
MROM_API void mrom_model_destroy(mrom_model* model);

MROM_API size_t mrom_result_num_states(const mrom_result* result);
/* Time and velocity coefficients of state k; *length receives the coefficient count. */
MROM_API mrom_status mrom_result_state(const mrom_result* result, size_t k, double* t, double* coeffs,
                                       size_t capacity, size_t* length);
MROM_API mrom_status mrom_result_errors(const mrom_result* result, double* mean_eps_u, double* mean_eps_p);
MROM_API double mrom_result_inlet_mismatch(const mrom_result* result);
MROM_API void mrom_result_destroy(mrom_result* result);

#ifdef __cplusplus
}
#endif

#endif

#ifndef DNLS_DNLS_H
#define DNLS_DNLS_H

/* C interface to the dissipative NLS solver.
 *
 * Every function returns a dnls_status. On failure the message is available
 * from dnls_last_error() on the calling thread until the next call.
 * Complex arrays are interleaved (re, im) doubles of length 2 * n.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(DNLS_BUILDING)
#    define DNLS_API __declspec(dllexport)
#  else
#    define DNLS_API __declspec(dllimport)
#  endif
#else
#  define DNLS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dnls_status {
  DNLS_OK = 0,
  DNLS_INVALID_ARGUMENT = 1,
  DNLS_CONFIG_ERROR = 2,
  DNLS_IO_ERROR = 3,
  DNLS_SIMULATION_ERROR = 4,
  DNLS_INTERNAL_ERROR = 5
} dnls_status;

typedef struct dnls_config dnls_config;
typedef struct dnls_grid dnls_grid;
typedef struct dnls_case dnls_case;

/* Receives one line of progress or result text (no trailing newline). */
typedef void (*dnls_line_fn)(const char* line, void* user);

DNLS_API const char* dnls_version(void);
DNLS_API const char* dnls_status_string(dnls_status status);
DNLS_API const char* dnls_last_error(void);

/* Configuration */
DNLS_API dnls_status dnls_config_parse(const char* text, dnls_config** out);
DNLS_API dnls_status dnls_config_load(const char* path, dnls_config** out);
/* name: decoupled, symmetric, generic, A, B */
DNLS_API dnls_status dnls_config_scenario(const char* name, dnls_config** out);
DNLS_API dnls_status dnls_config_set_output_dir(dnls_config* config, const char* dir);
/* Writes at most capacity bytes including the terminator; *needed gets the full size. */
DNLS_API dnls_status dnls_config_serialize(const dnls_config* config, char* buffer, size_t capacity,
                                           size_t* needed);
DNLS_API void dnls_config_free(dnls_config* config);

/* Grid and array-level transforms */
DNLS_API dnls_status dnls_grid_create(size_t n, double length, dnls_grid** out);
DNLS_API size_t dnls_grid_size(const dnls_grid* grid);
DNLS_API dnls_status dnls_grid_x(const dnls_grid* grid, double* out);
DNLS_API dnls_status dnls_grid_xi(const dnls_grid* grid, double* out);
DNLS_API dnls_status dnls_forward_ft(const dnls_grid* grid, const double* in, double* out);
DNLS_API dnls_status dnls_inverse_ft(const dnls_grid* grid, const double* in, double* out);
/* Free Schroedinger propagation of a space-side field by time t. */
DNLS_API dnls_status dnls_free_propagate(const dnls_grid* grid, const double* in, double t, double* out);
DNLS_API void dnls_grid_free(dnls_grid* grid);

/* One simulated case */
DNLS_API dnls_status dnls_case_run(const dnls_config* config, double epsilon, dnls_case** out);
DNLS_API size_t dnls_case_grid_size(const dnls_case* c);
DNLS_API double dnls_case_threshold(const dnls_case* c);
DNLS_API size_t dnls_case_snapshot_count(const dnls_case* c);
DNLS_API dnls_status dnls_case_snapshot_time(const dnls_case* c, size_t index, double* t);
/* method: 0 endpoint, 1 integral; out has grid-size entries. */
DNLS_API dnls_status dnls_case_m(const dnls_case* c, int method, double* out);
/* lemma1, lemma2, theorem, tail, quadrature_error */
DNLS_API dnls_status dnls_case_defects(const dnls_case* c, double out[5]);
DNLS_API void dnls_case_free(dnls_case* c);

/* Commands writing tables into the config's output directory. */
DNLS_API dnls_status dnls_run_evolve(const dnls_config* config, dnls_line_fn log, void* user);
DNLS_API dnls_status dnls_run_mprofile(const dnls_config* config, dnls_line_fn log, void* user);
DNLS_API dnls_status dnls_run_sweep(const dnls_config* config, unsigned max_workers, dnls_line_fn log,
                                    void* user);
DNLS_API dnls_status dnls_run_scenario(const char* name, const char* output_dir, dnls_line_fn log, void* user);
/* Runs the acceptance suite; one line per criterion. *failures counts failed criteria.
 * only/only_count select criterion ids (NULL or 0 runs all). */
DNLS_API dnls_status dnls_run_verify(const int* only, size_t only_count, unsigned max_workers, dnls_line_fn log,
                                     void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* DNLS_DNLS_H */

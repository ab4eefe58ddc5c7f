/* C API for the spatial birth-death simulator.
 *
 * Every object is an opaque handle created by an sbd_*_create function and
 * released by the matching sbd_*_free. Functions return SBD_OK (0) on
 * success; on failure sbd_last_error() describes the problem for the
 * calling thread. Points are passed as flat double arrays of the space
 * dimension.
 */

#ifndef SBD_SBD_H
#define SBD_SBD_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SBD_OK = 0,
  SBD_ERR_INVALID_ARGUMENT = 1,
  SBD_ERR_PRECONDITION = 2,
  SBD_ERR_IO = 3,
  SBD_ERR_PARSE = 4,
  SBD_ERR_INTERNAL = 5
} sbd_status;

typedef enum { SBD_SPACE_TORUS = 0, SBD_SPACE_INTERVAL = 1, SBD_SPACE_BOX = 2 } sbd_space_kind;
typedef enum { SBD_EVENT_PLUS = 0, SBD_EVENT_MINUS = 1 } sbd_event_kind;
typedef enum {
  SBD_CERT_EMPTY_REGENERATION = 0,
  SBD_CERT_DOUBLING_FIXPOINT = 1,
  SBD_CERT_NOT_CONVERGED = 2
} sbd_certificate;

typedef struct sbd_space sbd_space;
typedef struct sbd_density sbd_density;
typedef struct sbd_policy sbd_policy;
typedef struct sbd_history sbd_history;
typedef struct sbd_config sbd_config;
typedef struct sbd_region sbd_region;
typedef struct sbd_sample sbd_sample;
typedef struct sbd_experiment sbd_experiment;

const char* sbd_version(void);
/* Message of the last failure on this thread; empty string if none. */
const char* sbd_last_error(void);
void sbd_string_free(char* s);

/* --- state spaces ----------------------------------------------------- */

sbd_status sbd_space_create_torus(const double* lengths, int dim, sbd_space** out);
sbd_status sbd_space_create_interval(double length, sbd_space** out);
sbd_status sbd_space_create_box(const double* lengths, int dim, sbd_space** out);
void sbd_space_free(sbd_space* space);
sbd_status sbd_space_dim(const sbd_space* space, int* out);
sbd_status sbd_space_get_kind(const sbd_space* space, sbd_space_kind* out);
sbd_status sbd_space_distance(const sbd_space* space, const double* x, const double* y,
                              int dim, double* out);
sbd_status sbd_space_translate(const sbd_space* space, const double* x, const double* shift,
                               int dim, double* out);
/* Coordinatewise partial order; independent of any space. */
sbd_status sbd_leq_orthant(const double* x, const double* y, int dim, int* out);

/* --- location densities ------------------------------------------------ */

sbd_status sbd_density_create_uniform(sbd_density** out);
sbd_status sbd_density_create_piecewise(const double* breakpoints, int n_breakpoints,
                                        const double* weights, int n_weights,
                                        sbd_density** out);
void sbd_density_free(sbd_density* density);

/* --- policies ----------------------------------------------------------- */

/* kind is one of "LG", "LR", "LO", "GG", "GO". */
sbd_status sbd_policy_create(const char* kind, double radius, sbd_policy** out);
void sbd_policy_free(sbd_policy* policy);

/* --- event histories ----------------------------------------------------- */

sbd_status sbd_history_create(const sbd_space* space, const sbd_density* density,
                              double p_plus, uint64_t seed, sbd_history** out);
sbd_status sbd_history_create_rates(const sbd_space* space, const sbd_density* density,
                                    double lambda_plus, double lambda_minus, uint64_t seed,
                                    sbd_history** out);
void sbd_history_free(sbd_history* history);
/* location must hold space dimension doubles. */
sbd_status sbd_history_event(const sbd_history* history, int64_t index,
                             sbd_event_kind* kind, double* location, uint64_t* tie_seed);

/* --- configurations ------------------------------------------------------ */

sbd_status sbd_config_create(sbd_config** out);
sbd_status sbd_config_clone(const sbd_config* config, sbd_config** out);
void sbd_config_free(sbd_config* config);
sbd_status sbd_config_add_atom(sbd_config* config, const double* x, int dim);
/* Fails with SBD_ERR_PRECONDITION when the atom is absent. */
sbd_status sbd_config_remove_atom(sbd_config* config, const double* x, int dim);
sbd_status sbd_config_mass(const sbd_config* config, uint64_t* out);
sbd_status sbd_config_distinct_atoms(const sbd_config* config, uint64_t* out);
sbd_status sbd_config_atom(const sbd_config* config, uint64_t index, double* location,
                           uint32_t* multiplicity);
sbd_status sbd_config_equals(const sbd_config* a, const sbd_config* b, int* out);
sbd_status sbd_config_is_dominated(const sbd_config* p, const sbd_config* q, int* out);
sbd_status sbd_config_count_in_ball(const sbd_config* config, const sbd_space* space,
                                    const double* x, int dim, double radius, uint64_t* out);
sbd_status sbd_config_has_point_in_orthant(const sbd_config* config, const sbd_space* space,
                                           const double* x, int dim, int* out);
sbd_status sbd_config_write_csv(const sbd_config* config, const sbd_space* space,
                                const char* path);
/* Caller frees the returned string with sbd_string_free. */
sbd_status sbd_config_to_json(const sbd_config* config, char** out);

/* --- regions -------------------------------------------------------------- */

sbd_status sbd_region_create_ball(const double* center, int dim, double radius,
                                  sbd_region** out);
sbd_status sbd_region_create_box(const double* lower, const double* upper, int dim,
                                 sbd_region** out);
sbd_status sbd_region_create_boundary_strip(double delta, sbd_region** out);
void sbd_region_free(sbd_region* region);
sbd_status sbd_config_count_in_region(const sbd_config* config, const sbd_space* space,
                                      const sbd_region* region, uint64_t* out);

/* --- dynamics --------------------------------------------------------------- */

/* t1(x, config): found is 0 when no atom is admissible, else 1 and the
 * target location is written. */
sbd_status sbd_select_target(const sbd_policy* policy, const sbd_space* space,
                             const sbd_config* config, const double* x, int dim,
                             uint64_t tie_seed, int* found, double* target);
/* Applies the event at `index` to the configuration in place. */
sbd_status sbd_step(sbd_config* config, const sbd_history* history, const sbd_policy* policy,
                    int64_t index);
sbd_status sbd_simulate_forward(sbd_config* config, const sbd_history* history,
                                const sbd_policy* policy, int64_t start_index,
                                uint64_t n_events);

/* --- backward coupling ------------------------------------------------------ */

sbd_status sbd_backward_iterate(const sbd_history* history, const sbd_policy* policy,
                                uint64_t depth, sbd_config** out);
/* window may be NULL. */
sbd_status sbd_sample_stationary(const sbd_history* history, const sbd_policy* policy,
                                 uint64_t max_depth, const sbd_region* window,
                                 sbd_sample** out);
void sbd_sample_free(sbd_sample* sample);
sbd_status sbd_sample_config(const sbd_sample* sample, sbd_config** out);
sbd_status sbd_sample_depth_used(const sbd_sample* sample, uint64_t* out);
sbd_status sbd_sample_certificate(const sbd_sample* sample, sbd_certificate* out);
sbd_status sbd_sample_regeneration_index(const sbd_sample* sample, int64_t* out);

/* coupled is 0 when the configurations did not meet within max_events. */
sbd_status sbd_coupling_time(const sbd_config* initial_a, const sbd_config* initial_b,
                             const sbd_history* history, const sbd_policy* policy,
                             int64_t start_index, uint64_t max_events, int* coupled,
                             uint64_t* time);

/* --- experiments -------------------------------------------------------------- */

sbd_status sbd_experiment_create_from_file(const char* path, sbd_experiment** out);
sbd_status sbd_experiment_create_from_string(const char* json, sbd_experiment** out);
void sbd_experiment_free(sbd_experiment* experiment);
sbd_status sbd_experiment_set_seed(sbd_experiment* experiment, uint64_t seed);
sbd_status sbd_experiment_set_workers(sbd_experiment* experiment, int workers);
sbd_status sbd_experiment_set_output_dir(sbd_experiment* experiment, const char* dir);
sbd_status sbd_experiment_set_suite(sbd_experiment* experiment, const char* suite);
/* "forward" | "stationary" | "couple" | "acceptance"; caller frees. */
sbd_status sbd_experiment_mode_kind(const sbd_experiment* experiment, char** out);
/* JSON array of {severity, message}; caller frees. */
sbd_status sbd_experiment_validate(const sbd_experiment* experiment, char** diagnostics);
/* exit_status: 0 ok, 1 validation failure or failed acceptance criterion,
 * 2 I/O failure. */
sbd_status sbd_experiment_run(const sbd_experiment* experiment, int* exit_status);

#ifdef __cplusplus
}
#endif

#endif /* SBD_SBD_H */

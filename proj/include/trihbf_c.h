/* C interface to the tri-hybrid ISAC beamforming simulator.
 *
 * All functions return THBF_OK on success; on failure a status code is
 * returned and thbf_last_error() yields a thread-local message. Objects are
 * opaque handles released with the matching *_free function. Strings returned
 * through char** outputs are owned by the caller and released with
 * thbf_string_free.
 */
#ifndef TRIHBF_C_H
#define TRIHBF_C_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum thbf_status {
  THBF_OK = 0,
  THBF_ERR_INVALID_ARG = 1,
  THBF_ERR_PARSE = 2,
  THBF_ERR_IO = 3,
  THBF_ERR_NUMERIC = 4,
  THBF_ERR_INTERNAL = 5
} thbf_status;

typedef struct thbf_scenario thbf_scenario;
typedef struct thbf_table thbf_table;

const char* thbf_version(void);
const char* thbf_last_error(void);
void thbf_string_free(char* s);

/* Scenario configuration (JSON text; missing fields take defaults). */
thbf_status thbf_scenario_from_json(const char* json_text, thbf_scenario** out);
thbf_status thbf_scenario_from_file(const char* path, thbf_scenario** out);
thbf_status thbf_scenario_defaults(thbf_scenario** out);
thbf_status thbf_scenario_to_json(const thbf_scenario* scenario, char** json_out);
thbf_status thbf_scenario_set_workers(thbf_scenario* scenario, int workers);
void thbf_scenario_free(thbf_scenario* scenario);

/* Monte-Carlo runs. Raw tables carry one row per
 * (architecture, delta_c, realization); sweep tables carry aggregates. */
thbf_status thbf_run(const thbf_scenario* scenario, thbf_table** out);
thbf_status thbf_sweep_tradeoff(const thbf_scenario* scenario, thbf_table** out);
thbf_status thbf_sweep_nu(const thbf_scenario* scenario, const int* nu_values,
                          size_t n_values, thbf_table** out);

size_t thbf_table_rows(const thbf_table* table);
thbf_status thbf_table_to_csv(const thbf_table* table, char** csv_out);
thbf_status thbf_table_to_json(const thbf_table* table, char** json_out);
/* format: "csv" or "json" */
thbf_status thbf_table_write(const thbf_table* table, const char* path,
                             const char* format);
void thbf_table_free(thbf_table* table);

/* Single tri-hybrid solve on realization 0 of the scenario; returns the
 * per-iteration trace as CSV (iteration,z,ratio_objective,p1_objective,
 * elapsed_ms). use_manifold selects the conjugate-gradient variant. */
thbf_status thbf_convergence_trace(const thbf_scenario* scenario, double delta_c,
                                   int use_manifold, char** csv_out);

/* Runs the built-in oracle battery. The report has one line per check. */
thbf_status thbf_verify(char** report_out, int* n_failures);

#ifdef __cplusplus
}
#endif

#endif /* TRIHBF_C_H */

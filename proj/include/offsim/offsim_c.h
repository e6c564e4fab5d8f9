/* C API for the offsim core: opaque handles, integer status codes, and
 * string outputs owned by the library. Every function is thread-safe as
 * long as each scenario handle is used from one thread at a time. */

#ifndef OFFSIM_C_H
#define OFFSIM_C_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct offsim_scenario offsim_scenario;

typedef enum offsim_status {
    OFFSIM_OK = 0,
    OFFSIM_ERR_CONFIG = 2,     /* malformed input or unknown preset */
    OFFSIM_ERR_INFEASIBLE = 3, /* scenario cannot run on this hardware */
    OFFSIM_ERR_INVARIANT = 4,  /* simulation or trace invariant violated */
    OFFSIM_ERR_INTERNAL = 5
} offsim_status;

const char* offsim_version(void);

/* Last error message of the calling thread; valid until the next failing
 * call on the same thread. Never NULL. */
const char* offsim_last_error(void);

/* Frees strings returned through char** out-parameters. */
void offsim_string_free(char* s);

/* ---- scenarios ---- */

offsim_status offsim_scenario_parse(const char* json_text, offsim_scenario** out);
offsim_status offsim_scenario_from_preset(const char* preset_name, offsim_scenario** out);
void offsim_scenario_free(offsim_scenario* s);

/* Serializes the resolved scenario back to its document form. */
offsim_status offsim_scenario_to_json(const offsim_scenario* s, char** json_out);

/* Targeted overrides for command-line flags. Keys: "variant" (serial |
 * pipelined | overlapped), "batch_size", "n_ssd", "planner" (auto |
 * coefficient value in [0,1]). */
offsim_status offsim_scenario_override(offsim_scenario* s, const char* key, const char* value);

/* Newline-separated preset listings. */
offsim_status offsim_preset_names(char** names_out);

/* ---- commands ---- */

offsim_status offsim_plan(const offsim_scenario* s, char** report_json_out);

/* trace_json_out may be NULL when the Chrome trace is not needed.
 * Returns OFFSIM_ERR_INVARIANT when the trace fails its checks (the
 * summary is still written in that case). */
offsim_status offsim_simulate(const offsim_scenario* s, char** summary_json_out,
                              char** trace_json_out);

offsim_status offsim_sweep(const offsim_scenario* s, const char* axis, const double* values,
                           size_t value_count, int workers, char** csv_out);

offsim_status offsim_capacity(const offsim_scenario* s, const double* cpu_mem_gb,
                              size_t value_count, char** csv_out);

/* Returns OFFSIM_ERR_CONFIG when hardware validation reports errors; the
 * report is still written. */
offsim_status offsim_validate(const offsim_scenario* s, char** report_json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OFFSIM_C_H */

#ifndef UDNMF_H
#define UDNMF_H

/* C interface to the network simulator and mean-field engine. All entry
 * points return a status code; on failure udnmf_last_error() carries a
 * human-readable message (thread-local, overwritten by the next call made
 * on the same thread). Strings handed out through char** are owned by the
 * caller and released with udnmf_string_free(). */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    UDNMF_OK = 0,
    UDNMF_E_INVALID = 1,     /* parameter violates a documented invariant */
    UDNMF_E_DOMAIN = 2,      /* input outside a function's mathematical domain */
    UDNMF_E_CONVERGENCE = 3, /* iterative solver exhausted its budget */
    UDNMF_E_DATA = 4,        /* estimator got an empty/degenerate sample */
    UDNMF_E_IO = 5,          /* file read/write failure */
    UDNMF_E_PARSE = 6,       /* config text malformed or incomplete */
    UDNMF_E_INTERNAL = 7     /* unexpected failure */
} udnmf_status;

typedef struct udnmf_config udnmf_config;
typedef struct udnmf_report udnmf_report;

const char* udnmf_version(void);
const char* udnmf_last_error(void);

/* Configs hold a flat JSON document (the documented schema). Values set on
 * top of a preset override its defaults; everything is validated when the
 * config is serialized or run. */
udnmf_status udnmf_config_create(udnmf_config** out);
udnmf_status udnmf_config_from_preset(const char* name, udnmf_config** out);
udnmf_status udnmf_config_from_json(const char* text, udnmf_config** out);
udnmf_status udnmf_config_load(const char* path, udnmf_config** out);
/* value is parsed as a JSON literal (number, bool, array, quoted string) */
udnmf_status udnmf_config_set(udnmf_config* cfg, const char* key, const char* value);
/* value stored verbatim as a string; use for paths and enum names */
udnmf_status udnmf_config_set_string(udnmf_config* cfg, const char* key, const char* value);
/* canonical effective config: preset defaults applied, every field explicit */
udnmf_status udnmf_config_to_json(const udnmf_config* cfg, char** out_text);
void udnmf_config_destroy(udnmf_config* cfg);

/* Runs the experiment the config describes; writes the CSV when the config
 * names an output path. */
udnmf_status udnmf_run(const udnmf_config* cfg, udnmf_report** out);
udnmf_status udnmf_report_summary(const udnmf_report* rep, char** out_text);
udnmf_status udnmf_report_csv(const udnmf_report* rep, char** out_text);
udnmf_status udnmf_report_metric(const udnmf_report* rep, const char* name, double* out_value);
void udnmf_report_destroy(udnmf_report* rep);

void udnmf_string_free(char* text);

/* Scalar closed forms, exposed for callers that only need the analytics. */
udnmf_status udnmf_lambert_w0(double y, double* out);
udnmf_status udnmf_coverage_probability(double lambda_b, double radius, double* out);
udnmf_status udnmf_active_probability(double lambda_b, double lambda_u, double* out);
udnmf_status udnmf_mf_interference(double lambda_b, double lambda_u, int n_antennas,
                                   double alpha, double radius, double p_hat, double eg2,
                                   double* out);

#ifdef __cplusplus
}
#endif

#endif /* UDNMF_H */

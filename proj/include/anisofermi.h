/*
 * anisofermi — fermion pair creation and vacuum stress tensor in anisotropic
 * Bianchi type-I backgrounds.
 *
 * C interface to the shared library: opaque handles plus status codes. All
 * functions returning af_status set a thread-local error message retrievable
 * with af_last_error() on failure.
 */
#ifndef ANISOFERMI_H
#define ANISOFERMI_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum af_status {
    AF_OK = 0,
    AF_ERR_INVALID = 1, /* null handle / bad argument */
    AF_ERR_CONFIG = 2,  /* configuration parse or validation failure */
    AF_ERR_NUMERIC = 3, /* numerical failure (divergence, stiffness, domain) */
    AF_ERR_IO = 4       /* file system failure */
} af_status;

typedef struct af_config af_config;
typedef struct af_results af_results;

const char* af_version(void);

/* Message for the most recent failure on this thread ("" if none). */
const char* af_last_error(void);

af_status af_config_parse_string(const char* text, af_config** out);
af_status af_config_parse_file(const char* path, af_config** out);
void af_config_free(af_config* cfg);

/* Override one entry using the dotted config key, e.g.
 * af_config_set(cfg, "run.threads", "4"). The value is parsed and validated
 * exactly as if it had appeared in the config file. */
af_status af_config_set(af_config* cfg, const char* key, const char* value);

/* 16 hex characters + NUL. Stable under reordering of the source text. */
af_status af_config_digest(const af_config* cfg, char out[17]);

/* Validation report: returns AF_OK and sets *n_violations (informational
 * flags are appended too). `buf` receives a newline-separated report. */
af_status af_config_check(const af_config* cfg, char* buf, size_t buflen,
                          int* n_violations);

af_status af_run(const af_config* cfg, af_results** out);
void af_results_free(af_results* results);

int af_results_time_count(const af_results* results);
double af_results_time(const af_results* results, int i);
/* out: T00, T11, T22, T33, T12, T13, T23, n */
af_status af_results_stress(const af_results* results, int i, double out[8]);
double af_results_max_residual(const af_results* results);
af_status af_results_digest(const af_results* results, char out[17]);

/* Write stress.csv, spectrum_<tindex>.csv and manifest.json into dir
 * (created if missing). Pass NULL to use the configured output directory. */
af_status af_results_write(const af_results* results, const char* dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ANISOFERMI_H */

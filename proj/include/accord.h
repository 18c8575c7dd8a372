/* accord - measurement agreement toolkit, C API.
 *
 * All functions return ACCORD_OK on success. On failure the out parameter is
 * untouched and accord_last_error() describes the problem (thread-local).
 * Strings returned through char** are owned by the caller; release them with
 * accord_string_free. Handles are opaque; release with the matching _free.
 */
#ifndef ACCORD_H
#define ACCORD_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  ACCORD_OK = 0,
  ACCORD_ERR_INPUT = 2,   /* malformed or inconsistent input data */
  ACCORD_ERR_NUMERIC = 3, /* numerical failure */
  ACCORD_ERR_IO = 4
} accord_status;

typedef struct accord_dataset accord_dataset;
typedef struct accord_report accord_report;

const char* accord_version(void);
const char* accord_last_error(void);
void accord_string_free(char* s);

/* --- datasets ----------------------------------------------------------- */

/* CSV header: object_id,instrument_id,replicate,variable,value */
accord_status accord_dataset_parse_csv(const char* text, accord_dataset** out);
accord_status accord_dataset_read_csv(const char* path, accord_dataset** out);
void accord_dataset_free(accord_dataset* ds);
size_t accord_dataset_size(const accord_dataset* ds);
accord_status accord_dataset_emit_csv(const accord_dataset* ds, char** out);

/* --- analyses ----------------------------------------------------------- */

/* outcomes CSV header: object_id,suite_id,case_id,granularity,outcome.
 * granularity: "class", "method" or "assertion". */
accord_status accord_score(const char* outcomes_csv, const char* granularity,
                           accord_report** out);

/* coverage_mode: "t", "normal" or "fixed2". truth_csv may be NULL; when
 * given (header object_id,value) a deviation-from-reference section is
 * added. has_reference/reference supply an optional trueness baseline. */
accord_status accord_accuracy(const accord_dataset* ds, const char* variable,
                              const char* coverage_mode, double alpha,
                              double s_r, int has_reference, double reference,
                              const char* truth_csv, double epsilon,
                              accord_report** out);

/* instrument_a/b may be NULL: the first two instruments in the dataset are
 * used. Differences are instrument_a - instrument_b. */
accord_status accord_bland_altman(const accord_dataset* ds,
                                  const char* variable,
                                  const char* instrument_a,
                                  const char* instrument_b, double k,
                                  accord_report** out);

accord_status accord_icc(const accord_dataset* ds, const char* variable,
                         accord_report** out);

accord_status accord_correlate(const accord_dataset* ds, const char* variable,
                               const char* instrument_a,
                               const char* instrument_b, accord_report** out);

/* experiment CSV header: subject_id,group,treatment,task,variable,value */
accord_status accord_mixed(const char* experiment_csv, const char* variable,
                           accord_report** out);

/* spec_json fields: n_objects, instruments [{id, bias}], sigma_object,
 * sigma_interaction, sigma_noise, replicates, seed.
 * estimator: trueness, repeatability, s_M, s_M2, d_bar, s_d, rho, pearson_r */
accord_status accord_simulate(const char* spec_json, const char* estimator,
                              int n_reps, accord_report** out);

/* --- reports ------------------------------------------------------------ */

const char* accord_report_json(const accord_report* rep);
/* 1 when the report carries plottable data (bland-altman or deviation). */
int accord_report_has_plot(const accord_report* rep);
accord_status accord_report_svg(const accord_report* rep, char** out);
accord_status accord_report_points_csv(const accord_report* rep, char** out);
void accord_report_free(accord_report* rep);

#ifdef __cplusplus
}
#endif

#endif /* ACCORD_H */

#ifndef SENDOVLAB_H
#define SENDOVLAB_H

/* C interface to the sendovlab core.  All functions return a status code:
 *   0  success
 *   1  contract violation (bad arguments, malformed input)
 *   2  numerical failure (non-convergence, degeneracy, stratum boundary)
 * Findings (conjecture violations) are reported through data, not codes.
 * On nonzero status, svl_last_error() describes the failure (thread-local).
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SVL_OK 0
#define SVL_ERR_CONTRACT 1
#define SVL_ERR_NUMERIC 2

#define SVL_MAX_DEGREE 64

typedef struct svl_config svl_config; /* a zero configuration */

const char* svl_version(void);
const char* svl_last_error(void);

/* Tolerance overrides for subsequent calls in this process (defaults:
 * sep 1e-7, cluster 1e-8, rank 1e-10). */
int svl_set_tolerances(double sep, double cluster, double rank);
void svl_get_tolerances(double* sep, double* cluster, double* rank);

/* ----- configurations ----- */

/* Text format: optional header "n m" or "n=N m=M", then "re im mult"
 * statements separated by newlines or semicolons; or "roots_of_unity:N". */
int svl_config_parse(const char* text, svl_config** out);
int svl_config_create(const double* re, const double* im, const int* mult,
                      int m, svl_config** out);
void svl_config_free(svl_config* cfg);
int svl_config_degree(const svl_config* cfg);
int svl_config_distinct(const svl_config* cfg);
void svl_config_zero(const svl_config* cfg, int i, double* re, double* im,
                     int* mult);
/* Returns the length written (excluding NUL); call with buf == NULL to size. */
int svl_config_serialize(const svl_config* cfg, char* buf, int cap);

/* ----- classification and critical points ----- */

/* mu: m entries; nu: up to m-1 entries; *k receives the nu count. */
int svl_classify(const svl_config* cfg, int* mu, int* nu, int* k);

/* Arrays sized >= 2 (degree - 1).  First-kind points come first. */
int svl_critical_points(const svl_config* cfg, double* re, double* im,
                        int* mult, int* first_count, int* second_count);

/* ----- Sendov objective ----- */

int svl_sendov_S(const svl_config* cfg, double* value, int* zero_index,
                 int* crit_index);
int svl_sendov_S_ell(const svl_config* cfg, int ell, double* value,
                     int* crit_index);
int svl_centroid_xi(const svl_config* cfg, double* re, double* im);

/* ----- rank sweep ----- */

typedef void (*svl_sweep_cb)(void* user, uint64_t index, double sigma_ratio,
                             int rank, int deficient, const double* zre,
                             const double* zim, const int* mult, int m);

/* stratum: "n:mu_1,...,mu_m/nu_1,...,nu_k" */
int svl_rank_sweep(const char* stratum, int samples, uint64_t seed,
                   svl_sweep_cb cb, void* user, int* samples_built,
                   int* deficient_count, double* min_sigma_ratio);

/* ----- continuation ----- */

typedef void (*svl_track_cb)(void* user, int step, const double* dep_re,
                             const double* dep_im, int s,
                             const double* free_re, const double* free_im,
                             int nf, const double* crit_re,
                             const double* crit_im, int k, double residual);

/* Tracks from cfg (first m-1-k zeros dependent) to the target values of the
 * free zeros.  *completed = 0 means the path stopped early; stop_reason is
 * filled (and the partial trajectory was still reported). */
int svl_track(const svl_config* cfg, const double* target_re,
              const double* target_im, int nf, double max_step,
              svl_track_cb cb, void* user, int* completed, char* stop_reason,
              int reason_cap);

/* Cauchy-Riemann scan of one output over a square grid (side 2*radius) of
 * one free variable.  values_re/im and ok are resolution^2 arrays. */
int svl_scan(const svl_config* cfg, int variable_index, int output_index,
             double radius, int resolution, double* values_re,
             double* values_im, int* ok, double* max_cr_residual,
             int* failed_points);

/* ----- findings ----- */

typedef void (*svl_finding_cb)(void* user, double S, const double* re,
                               const double* im, const int* mult, int m);

/* ----- search drivers ----- */

typedef void (*svl_trace_cb)(void* user, int index, double value);

int svl_search(const svl_config* cfg, int ell, int steps, uint64_t seed,
               double eps_report, svl_trace_cb trace, svl_finding_cb finding,
               void* user, svl_config** best, int* accepted, int* collapses,
               double* kkt_residual_norm, int* kkt_feasible);

int svl_sample(int n, int samples, uint64_t seed, double eps_report,
               svl_finding_cb finding, void* user, double* max_S,
               uint64_t* argmax_index, svl_config** argmax, int* skipped);

/* ----- KKT ----- */

/* Least-squares multiplier recovery at the k = 1 critical point.
 * eta: m entries; grad: 2m entries (a_1, b_1, a_2, b_2, ...). */
int svl_kkt_fit(const svl_config* cfg, int i0, double* lambda,
                double* theta_lambda, double* eta, double* grad,
                double* residual_norm, double* max_mismatch, int* feasible);

/* ----- enclosing disk ----- */

/* support: array of >= 3 ints; *support_count receives how many are used. */
int svl_enclosing_disk(const double* re, const double* im, int count,
                       double* center_re, double* center_im, double* radius,
                       int* support, int* support_count);

#ifdef __cplusplus
}
#endif

#endif /* SENDOVLAB_H */

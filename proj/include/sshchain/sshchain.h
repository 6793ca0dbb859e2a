/*
 * sshchain C API: exactly solvable inhomogeneous SSH chains built by the
 * doubling of finite orthogonal-polynomial families.
 *
 * All functions return a status code (SSHC_OK on success) and write results
 * through out-parameters. Handles are opaque; every *_create has a matching
 * *_free. The last error message of the calling thread is available through
 * sshc_last_error().
 */
#ifndef SSHCHAIN_H
#define SSHCHAIN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SSHC_OK 0
#define SSHC_ERR_NULL_POINTER 1   /* required pointer argument was NULL */
#define SSHC_ERR_INVALID_ARGUMENT 2
#define SSHC_ERR_DOMAIN 3         /* parameter outside its documented domain */
#define SSHC_ERR_INADMISSIBLE 4   /* parameters define no valid chain */
#define SSHC_ERR_INDEX 5
#define SSHC_ERR_NUMERIC 6        /* convergence failure */
#define SSHC_ERR_INTERNAL 7

typedef struct sshc_model sshc_model;
typedef struct sshc_report sshc_report;

typedef enum {
    SSHC_MODEL_SSH = 0,
    SSHC_MODEL_SSH_MU = 1,
    SSHC_MODEL_KRAWTCHOUK = 2,
    SSHC_MODEL_QRACAH1 = 3,
    SSHC_MODEL_QRACAH2 = 4
} sshc_model_kind;

typedef struct {
    sshc_model_kind kind;
    int N;            /* chain has 2N+1 sites (2N for SSHC_MODEL_QRACAH2) */
    double delta;     /* ssh: |delta| < 1 */
    double mu_plus;   /* ssh-mu diagonal */
    double mu_minus;
    double p;         /* krawtchouk: 0 < p < 1 */
    double q;         /* q-racah: 0 < q < 1 */
    double alpha;
    double beta;
    double qr_delta;
} sshc_model_params;

/* Fills defaults: ssh, N = 1, delta = 0, p = 0.5, q = 0.5, alpha = 0.3,
 * beta = 0.4, qr_delta = -0.5, mu = 0. */
int sshc_model_params_init(sshc_model_params* params);

int sshc_model_create(const sshc_model_params* params, sshc_model** out);
void sshc_model_free(sshc_model* model);

/* Number of lattice sites: 2N+1, or 2N in truncated (q-Racah II) mode. */
int sshc_model_site_count(const sshc_model* model, size_t* out);
/* 1 when the model runs in truncated even-chain mode (t-_{N-1} = 0). */
int sshc_model_truncated(const sshc_model* model, int* out);

/* Closed-form spectrum, ascending; out must hold site_count values. */
int sshc_model_spectrum(const sshc_model* model, double* out, size_t capacity);
/* Numerical Sturm-bisection spectrum of the assembled matrix. tol <= 0 picks
 * the default 1e-12 * ||H||_inf. */
int sshc_model_oracle_spectrum(const sshc_model* model, double tol, double* out, size_t capacity);

/* Couplings t+_n, t-_n (arrays of length N) and the diagonal (length
 * site_count). Any of the outputs may be NULL. */
int sshc_model_couplings(const sshc_model* model, double* t_plus, double* t_minus, size_t capacity);
int sshc_model_diagonal(const sshc_model* model, double* diag, size_t capacity);
int sshc_model_cell_count(const sshc_model* model, size_t* out); /* N */

/* Eigenvector for the index-th eigenvalue (ascending). components must hold
 * site_count values; norm_sq receives the closed-form squared norm where the
 * model ships one (the direct dot product otherwise); residual receives
 * ||Hv - xv||_inf / (||H||_inf ||v||_inf). eigenvalue/norm_sq/residual may be
 * NULL. */
int sshc_model_eigenvector(const sshc_model* model, size_t index, double* eigenvalue,
                           double* components, size_t capacity, double* norm_sq, double* residual);

/* New model with off-diagonal bond (0-based, into the assembled matrix)
 * multiplied by (1 + rel); closed forms are left untouched so verification
 * fails. */
int sshc_model_corrupt_coupling(const sshc_model* model, size_t bond, double rel, sshc_model** out);

/* ---- verification ------------------------------------------------------- */

typedef struct {
    double tol_constraints;
    double tol_spectrum_abs;
    double tol_spectrum_rel;
    double tol_eigen_relation;
    double tol_orthogonality;
    double tol_norms;
    double tol_christoffel;
    double tol_family_orthogonality;
    double tol_contiguity;
    double tol_duality;
    double tol_self_duality;
    int christoffel_samples;
    unsigned long long seed;
    double oracle_tol_factor;
} sshc_verify_options;

int sshc_verify_options_init(sshc_verify_options* options);
/* Uniform threshold override: tighten freely, loosen at most to 1e-6. */
int sshc_verify_options_override(sshc_verify_options* options, double tol);

/* options == NULL runs with defaults. */
int sshc_verify_run(const sshc_model* model, const sshc_verify_options* options, sshc_report** out);
void sshc_report_free(sshc_report* report);

int sshc_report_overall(const sshc_report* report, int* out);
int sshc_report_check_count(const sshc_report* report, size_t* out);
/* name points into the report and stays valid until sshc_report_free.
 * skipped checks have passed = 1 and skipped = 1. Any output may be NULL. */
int sshc_report_check(const sshc_report* report, size_t index, const char** name, double* residual,
                      double* threshold, int* passed, int* skipped);
int sshc_report_check_note(const sshc_report* report, size_t index, const char** note);

/* ---- q-Racah admissibility scan ------------------------------------------ */

/* The shipped (alpha, beta, qr_delta) lattice probed by `verify --scan`. */
int sshc_qracah_lattice_size(size_t* out);
int sshc_qracah_lattice_point(size_t index, double* alpha, double* beta, double* qr_delta);

/* Known-good parameter sets found by the default scan. */
int sshc_qracah_sample_count(sshc_model_kind kind, size_t* out);
int sshc_qracah_sample(sshc_model_kind kind, size_t index, sshc_model_params* out);

/* Thread-local message for the most recent failing call. */
const char* sshc_last_error(void);
const char* sshc_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SSHCHAIN_H */
